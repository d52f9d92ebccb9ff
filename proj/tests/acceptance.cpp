// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "subfou/cli.hpp"
#include "subfou/format.hpp"
#include "subfou/inference.hpp"
#include "subfou/montecarlo.hpp"
#include "subfou/stats.hpp"
#include "subfou/validation.hpp"
#include "tmpdir.hpp"

using namespace subfou;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double x, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

Outcome from_check(const CheckResult& c) { return {c.pass, c.detail}; }

Outcome round_trip() {
    const auto p = derive_constants(0.7);
    std::string detail = "midpoint kernels, rel L2 by n:";
    double prev = INFINITY;
    bool ok = true;
    for (std::size_t n : {128, 256, 512}) {
        const auto c = build_cache(build_grid(1.0, n), p);
        const auto b = simulate_sfou(c.model, -1.0, 10, SeedPolicy{5});
        double num = 0, den = 0;
        for (std::size_t r = 0; r < 10; ++r) {
            const auto Z = transform_to_Z(b.row(r), c, TransformMethod::midpoint);
            const auto X = reconstruct_X(Z, c, TransformMethod::midpoint);
            for (std::size_t i = 0; i <= n; ++i) {
                const double x = b.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
                num += (X[i] - x) * (X[i] - x);
                den += x * x;
            }
        }
        const double err = std::sqrt(num / den);
        detail += " " + std::to_string(n) + "->" + fmt(err);
        ok = ok && err < prev;
        prev = err;
    }
    return {ok && prev <= 0.02, detail};
}

Outcome girsanov() {
    const auto p = derive_constants(0.7);
    const auto c = build_cache(build_grid(1.0, 256), p, {false, {}});
    const auto b = simulate_subfbm(c.grid, p, 2000, SeedPolicy{19});
    const double a = 0.5;
    std::vector<double> L(2000), LZ(2000);
    for (std::size_t r = 0; r < 2000; ++r) {
        L[r] = girsanov_weight(a, b.row(r), c);
        LZ[r] = L[r] * (b.values(static_cast<Eigen::Index>(r), 256) - a);
    }
    const double z1 = (mean(L) - 1.0) / std_error(L), z2 = mean(LZ) / std_error(LZ);
    return {std::abs(z1) < 3 && std::abs(z2) < 3,
            "E[L]=" + fmt(mean(L)) + " (" + fmt(z1, 2) + " se), E[L(zeta_T-aT)]=" + fmt(mean(LZ)) + " (" +
                fmt(z2, 2) + " se)"};
}

Outcome prediction() {
    const auto p = derive_constants(0.7);
    const auto full = build_grid(1.0, 128);
    const auto obs = build_grid(0.5, 64);
    const auto w = prediction_weights(obs, 1.0, p);
    const auto S = covariance_matrix(obs, p);
    Eigen::VectorXd s(64);
    for (int i = 0; i < 64; ++i) s(i) = cov_subfbm(obs.times[static_cast<std::size_t>(i) + 1], 1.0, p);
    const Eigen::VectorXd coef = S.ldlt().solve(s);
    const double condvar = cov_subfbm(1, 1, p) - s.dot(coef);
    const auto b = simulate_subfbm(full, p, 500, SeedPolicy{23});
    double mse = 0;
    for (std::size_t r = 0; r < 500; ++r) {
        std::span<const double> z(b.values.data() + r * 129, 65);
        double oracle = 0;
        for (int i = 0; i < 64; ++i) oracle += coef(i) * z[static_cast<std::size_t>(i) + 1];
        mse += std::pow(predict(z, w) - oracle, 2);
    }
    const double ratio = mse / 500 / condvar;
    return {ratio <= 0.05, "MSE / conditional variance = " + fmt(ratio)};
}

std::string horizons_line(const ExperimentReport& r, double HorizonRecord::*f) {
    std::string s;
    for (const auto& h : r.horizons) s += (s.empty() ? "" : ", ") + fmt(h.T) + ":" + fmt(h.*f);
    return s;
}

Outcome consistency() {
    bool ok = true;
    std::string detail;
    for (double H : {0.6, 0.7}) {
        McConfig c;
        c.H = H;
        c.reps = 200;
        const auto r = consistency_experiment(c);
        ok = ok && r.pass;
        detail += "H=" + fmt(H) + " median err {" + horizons_line(r, &HorizonRecord::median_err) + "} info {" +
                  horizons_line(r, &HorizonRecord::median_info) + "}; ";
    }
    return {ok, detail};
}

Outcome normality() {
    const auto r = normality_experiment(McConfig{});
    return {r.pass, "KS(S) {" + horizons_line(r, &HorizonRecord::ks) + "}, |KS(U)-KS(S)| at T=40 " +
                        fmt(std::abs(r.horizons.back().ks_u - r.horizons.back().ks_s)) + ", strictly monotone " +
                        (r.checks.at("ks_strictly_monotone") ? "yes" : "no")};
}

Outcome berry_esseen() {
    const auto r = berry_esseen_experiment(McConfig{});
    std::string d = "KS(U) {" + horizons_line(r, &HorizonRecord::ks) + "} bound {" +
                    horizons_line(r, &HorizonRecord::bound) + "} eps^2/delta {" +
                    horizons_line(r, &HorizonRecord::growth) + "} p_cond/sqrt(eps) {" +
                    horizons_line(r, &HorizonRecord::p_ratio) + "}";
    bool vacuous = false;
    for (const auto& h : r.horizons) vacuous = vacuous || h.vacuous;
    if (vacuous) d += " [bound >= 1 at some horizon: vacuous there]";
    return {r.pass, d};
}

Outcome tail() {
    const auto r = tail_experiment(McConfig{});
    std::string d = "T=40:";
    for (const auto& t : r.horizons.back().tail)
        d += " d=" + fmt(t.d) + " " + fmt(t.empirical) + "<=" + fmt(t.bound);
    d += std::string("; Gaussian tail inequality ") + (r.checks.at("gaussian_tail_inequality") ? "holds" : "fails");
    return {r.pass, d};
}

Outcome reproducibility() {
    TempDir dir("acceptance");
    const std::string cfgdir = SFOU_CONFIG_DIR;
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "--h", "0.7", "--theta", "-1", "--t-max", "10", "--steps", "1000", "--reps", "100", "--seed", "42"},
        {"simulate", "--h", "0.7", "--t-max", "1", "--steps", "128", "--reps", "20", "--seed", "3", "--method", "kernel_wiener"},
        {"estimate", "--h", "0.7", "--in", dir / "paths.csv"},
        {"predict", "--h", "0.7", "--in", dir / "zeta.csv", "--a", "0.5", "--t", "1"},
        {"mc-consistency", "--config", cfgdir + "/consistency.cfg"},
        {"mc-normality", "--config", cfgdir + "/normality.cfg", "--format", "json"},
        {"mc-berry-esseen", "--config", cfgdir + "/berry_esseen.cfg"},
        {"mc-tail", "--config", cfgdir + "/tail.cfg"},
        {"validate-kernels"},
    };
    std::stringstream sink;
    std::size_t same = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string outs[2];
        for (int k = 0; k < 2; ++k) {
            auto args = commands[i];
            const std::string file = dir / ("out" + std::to_string(i) + "_" + std::to_string(k));
            args.insert(args.end(), {"--out", file});
            dispatch(args, sink, sink);
            outs[k] = slurp(file);
        }
        if (i == 0) std::ofstream(dir / "paths.csv") << outs[0];
        if (i == 1) std::ofstream(dir / "zeta.csv") << outs[0];
        if (!outs[0].empty() && outs[0] == outs[1]) ++same;
    }
    return {same == commands.size(),
            std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical on rerun"};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "constants and degeneracy", 1, [] { return from_check(check_constants()); }},
        {2, "covariance properties", 1, [] { return from_check(check_covariance_properties()); }},
        {3, "representation identity", 30, [] { return from_check(check_representation_identity()); }},
        {4, "martingale quadratic variation", 120, [] { return from_check(check_martingale_variance()); }},
        {5, "transform round trip", 60, round_trip},
        {6, "Girsanov weight", 120, girsanov},
        {7, "prediction", 120, prediction},
        {8, "consistency", 600, consistency},
        {9, "asymptotic normality", 900, normality},
        {10, "Berry-Esseen chain", 1200, berry_esseen},
        {11, "tail bound", 300, tail},
        {12, "reproducibility", 600, reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, {}};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %-32s %s  [%.2fs / %gs]  %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                    c.limit, o.detail.c_str(), in_time ? "" : " (over time limit)");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

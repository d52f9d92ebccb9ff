#include "subfou/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "subfou/errors.hpp"
#include "subfou/format.hpp"
#include "subfou/parallel.hpp"
#include "subfou/special.hpp"
#include "subfou/stats.hpp"

namespace subfou {

namespace {

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + shortest(v[i]);
    return s;
}

std::vector<double> errors_of(const HorizonSample& h, double theta0) {
    std::vector<double> e(h.theta_hat.size());
    for (std::size_t r = 0; r < e.size(); ++r) e[r] = std::abs(h.theta_hat[r] - theta0);
    return e;
}

std::vector<double> studentized(const HorizonSample& h, double theta0) {
    std::vector<double> s(h.theta_hat.size());
    for (std::size_t r = 0; r < s.size(); ++r) s[r] = std::sqrt(h.info[r]) * (h.theta_hat[r] - theta0);
    return s;
}

HorizonRecord basic_record(const HorizonSample& h, double theta0) {
    HorizonRecord rec;
    rec.T = h.T;
    rec.steps = h.steps;
    rec.median_err = median(errors_of(h, theta0));
    rec.median_info = median(h.info);
    rec.mean_info = mean(h.info);
    rec.mean_theta = mean(h.theta_hat);
    rec.eta2_hat = rec.mean_info / h.T;
    rec.ks_s = ks_statistic(studentized(h, theta0));
    return rec;
}

// Pilot-normalized quantities of the Berry-Esseen chain at one horizon.
void fill_chain(HorizonRecord& rec, const HorizonSample& h, const HorizonSample& pilot,
                const McConfig& cfg) {
    const double pilot_mean = mean(pilot.info);
    if (!(pilot_mean > 0.0)) throw NumericError("pilot mean information is not positive");
    rec.delta = 1.0 / pilot_mean;
    rec.eps = cfg.eps0 * std::pow(h.T / cfg.horizons.front(), -cfg.kappa);
    const std::size_t n = h.theta_hat.size();
    std::vector<double> u(n), g(n);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < n; ++r) {
        u[r] = (h.theta_hat[r] - cfg.theta0) / std::sqrt(rec.delta);
        g[r] = std::sqrt(rec.delta) * (h.score[r] - cfg.theta0 * h.info[r]);
        if (std::abs(rec.delta * h.info[r] - 1.0) >= rec.eps) ++hits;
    }
    rec.ks_u = ks_statistic(u);
    rec.ks_gamma = ks_statistic(g);
    rec.p_cond = static_cast<double>(hits) / static_cast<double>(n);
    rec.p_ratio = rec.p_cond / std::sqrt(rec.eps);
    rec.growth = rec.eps * rec.eps / rec.delta;
    rec.bound = std::sqrt(2.0 * rec.eps) + 2.0 * rec.p_cond + rec.eps;
    rec.vacuous = rec.bound >= 1.0;
    // KS(U) <= KS(gamma) + P(|delta info - 1| >= eps) + eps, up to the sampling error of
    // two empirical KS distances (99% null quantile each)
    const double slack = 2.0 * 1.63 / std::sqrt(static_cast<double>(n));
    rec.chain_ok = rec.ks_u <= rec.ks_gamma + rec.p_cond + rec.eps + slack;
}

bool strictly_increasing(const std::vector<HorizonRecord>& h, double HorizonRecord::*f) {
    for (std::size_t i = 1; i < h.size(); ++i)
        if (!(h[i].*f > h[i - 1].*f)) return false;
    return true;
}

bool strictly_decreasing(const std::vector<HorizonRecord>& h, double HorizonRecord::*f) {
    for (std::size_t i = 1; i < h.size(); ++i)
        if (!(h[i].*f < h[i - 1].*f)) return false;
    return true;
}

ExperimentReport start(const std::string& name, const McConfig& cfg) {
    validate(cfg);
    ExperimentReport rep;
    rep.experiment = name;
    rep.seed = cfg.seeds.master_seed;
    rep.config_hash = config_hash(cfg);
    return rep;
}

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point t0) {
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

} // namespace

void validate(const McConfig& cfg) {
    if (!(cfg.H > 0.5 && cfg.H < 1.0)) throw ConfigError("h must lie in (1/2, 1)");
    if (!std::isfinite(cfg.theta0)) throw ConfigError("theta0 must be finite");
    if (cfg.horizons.size() < 3) throw ConfigError("at least 3 horizons are required");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
        if (i > 0 && !(cfg.horizons[i] > cfg.horizons[i - 1]))
            throw ConfigError("horizons must be strictly increasing");
        try {
            steps_for(cfg.horizons[i], cfg.dt);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    if (cfg.reps < 100) throw ConfigError("reps must be at least 100");
    if (cfg.pilot_reps < 50) throw ConfigError("pilot_reps must be at least 50");
    if (!(cfg.eps0 > 0.0)) throw ConfigError("eps0 must be positive");
    if (!(cfg.kappa > 0.0 && cfg.kappa < 0.5)) throw ConfigError("kappa must lie in (0, 1/2)");
    if (cfg.d_values.empty()) throw ConfigError("d_values must be nonempty");
    for (double d : cfg.d_values)
        if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("d_values must be positive");
    if (!(cfg.ks_max > 0.0 && cfg.ks_max < 1.0)) throw ConfigError("ks_max must lie in (0, 1)");
    if (!(cfg.normalization_gap > 0.0)) throw ConfigError("normalization_gap must be positive");
    if (!(cfg.mc_se > 0.0)) throw ConfigError("mc_se must be positive");
}

std::string canonical_text(const McConfig& cfg) {
    std::string s;
    auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
    kv("h", shortest(cfg.H));
    kv("theta0", shortest(cfg.theta0));
    kv("horizons", join(cfg.horizons));
    kv("dt", shortest(cfg.dt));
    kv("reps", std::to_string(cfg.reps));
    kv("pilot_reps", std::to_string(cfg.pilot_reps));
    kv("seed", std::to_string(cfg.seeds.master_seed));
    kv("eps0", shortest(cfg.eps0));
    kv("kappa", shortest(cfg.kappa));
    kv("d_values", join(cfg.d_values));
    kv("scheme", cfg.scheme == Scheme::exp_euler ? "exp_euler" : "plain_euler");
    kv("ks_max", shortest(cfg.ks_max));
    kv("normalization_gap", shortest(cfg.normalization_gap));
    kv("mc_se", shortest(cfg.mc_se));
    return s;
}

std::string config_hash(const McConfig& cfg) { return hex64(fnv1a(canonical_text(cfg))); }

std::vector<HorizonSample> run_nested(const McConfig& cfg, std::size_t reps, const SeedPolicy& seeds) {
    const double Tmax = cfg.horizons.back();
    const std::size_t n = steps_for(Tmax, cfg.dt);
    const auto p = derive_constants(cfg.H);
    CacheOptions opt;
    opt.kernel_matrices = false;
    const auto cache = build_cache(build_grid(Tmax, n), p, opt);
    std::vector<HorizonSample> out(cfg.horizons.size());
    for (std::size_t h = 0; h < out.size(); ++h) {
        out[h].T = cfg.horizons[h];
        out[h].steps = steps_for(cfg.horizons[h], cfg.dt);
        out[h].theta_hat.resize(reps);
        out[h].info.resize(reps);
        out[h].score.resize(reps);
    }
    parallel_for(reps, [&](std::size_t r) {
        std::vector<double> X(n + 1);
        try {
            auto rng = seeds.stream(r);
            const Eigen::VectorXd dz = draw_increments(cache.model, rng);
            integrate_sfou({dz.data(), n}, cfg.theta0, cache.grid.dt(), cfg.scheme, X);
            const auto s = score_path(X, cache);
            for (auto& h : out) {
                const double B = s.B[h.steps];
                if (!(B > 0.0)) throw NumericError("observed information is zero");
                h.score[r] = s.A[h.steps];
                h.info[r] = B;
                h.theta_hat[r] = s.A[h.steps] / B;
            }
        } catch (const std::exception& e) {
            throw NumericError("replicate " + std::to_string(r) + ": " + e.what());
        }
    });
    return out;
}

std::vector<EstimationResult> run_replications(const McConfig& cfg, double T) {
    validate(cfg);
    const std::size_t n = steps_for(T, cfg.dt);
    CacheOptions opt;
    opt.kernel_matrices = false;
    const auto cache = build_cache(build_grid(T, n), derive_constants(cfg.H), opt);
    const auto batch = simulate_sfou(cache.model, cfg.theta0, cfg.reps, cfg.seeds, cfg.scheme);
    std::vector<EstimationResult> out(cfg.reps);
    parallel_for(cfg.reps, [&](std::size_t r) {
        try {
            out[r] = mle(batch.row(r), cache);
        } catch (const std::exception& e) {
            throw NumericError("replicate " + std::to_string(r) + ": " + e.what());
        }
    });
    return out;
}

ExperimentReport consistency_experiment(const McConfig& cfg) {
    const auto t0 = SteadyClock::now();
    auto rep = start("consistency", cfg);
    for (const auto& h : run_nested(cfg, cfg.reps, cfg.seeds)) rep.horizons.push_back(basic_record(h, cfg.theta0));
    const bool err_down = strictly_decreasing(rep.horizons, &HorizonRecord::median_err);
    const bool info_up = strictly_increasing(rep.horizons, &HorizonRecord::median_info);
    rep.checks["median_error_decreasing"] = err_down;
    rep.checks["median_info_increasing"] = info_up;
    for (auto& r : rep.horizons) r.pass = err_down && info_up;
    rep.pass = err_down && info_up;
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

ExperimentReport normality_experiment(const McConfig& cfg) {
    const auto t0 = SteadyClock::now();
    auto rep = start("normality", cfg);
    const auto main = run_nested(cfg, cfg.reps, cfg.seeds);
    const auto pilot = run_nested(cfg, cfg.pilot_reps, cfg.seeds.derive("pilot"));
    for (std::size_t i = 0; i < main.size(); ++i) {
        auto rec = basic_record(main[i], cfg.theta0);
        fill_chain(rec, main[i], pilot[i], cfg);
        rec.ks = rec.ks_s;
        rep.horizons.push_back(rec);
    }
    const auto& first = rep.horizons.front();
    const auto& last = rep.horizons.back();
    rep.checks["final_ks_below_threshold"] = last.ks < cfg.ks_max;
    rep.checks["ks_decreased"] = last.ks < first.ks;
    rep.checks["ks_strictly_monotone"] = strictly_decreasing(rep.horizons, &HorizonRecord::ks);
    rep.checks["normalizations_agree"] = std::abs(last.ks_u - last.ks_s) <= cfg.normalization_gap;
    rep.checks["mean_info_increasing"] = strictly_increasing(rep.horizons, &HorizonRecord::mean_info);
    rep.pass = rep.checks["final_ks_below_threshold"] && rep.checks["ks_decreased"];
    for (auto& r : rep.horizons) r.pass = rep.pass;
    rep.horizons.back().pass = rep.checks["final_ks_below_threshold"];
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

ExperimentReport berry_esseen_experiment(const McConfig& cfg) {
    const auto t0 = SteadyClock::now();
    auto rep = start("berry-esseen", cfg);
    const auto main = run_nested(cfg, cfg.reps, cfg.seeds);
    const auto pilot = run_nested(cfg, cfg.pilot_reps, cfg.seeds.derive("pilot"));
    bool all_bounded = true, chain = true;
    for (std::size_t i = 0; i < main.size(); ++i) {
        auto rec = basic_record(main[i], cfg.theta0);
        fill_chain(rec, main[i], pilot[i], cfg);
        rec.ks = rec.ks_u;
        rec.pass = rec.ks <= rec.bound;
        all_bounded = all_bounded && rec.pass;
        chain = chain && rec.chain_ok;
        if (rec.vacuous)
            rep.notes.push_back("bound at T=" + shortest(rec.T) + " is >= 1 (vacuous)");
        rep.horizons.push_back(rec);
    }
    const bool growth = strictly_increasing(rep.horizons, &HorizonRecord::growth);
    rep.checks["ks_within_bound"] = all_bounded;
    rep.checks["growth_condition_increasing"] = growth;
    rep.checks["chain_inequality"] = chain;
    rep.checks["mean_info_increasing"] = strictly_increasing(rep.horizons, &HorizonRecord::mean_info);
    rep.pass = all_bounded && growth && chain;
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

ExperimentReport tail_experiment(const McConfig& cfg) {
    const auto t0 = SteadyClock::now();
    auto rep = start("tail", cfg);
    const auto main = run_nested(cfg, cfg.reps, cfg.seeds);
    const auto pilot = run_nested(cfg, cfg.pilot_reps, cfg.seeds.derive("pilot"));
    bool all = true;
    for (std::size_t i = 0; i < main.size(); ++i) {
        auto rec = basic_record(main[i], cfg.theta0);
        fill_chain(rec, main[i], pilot[i], cfg);
        rec.ks = rec.ks_u;
        const auto err = errors_of(main[i], cfg.theta0);
        rec.pass = true;
        for (double d : cfg.d_values) {
            TailRecord t;
            t.d = d;
            t.empirical = static_cast<double>(std::count_if(err.begin(), err.end(),
                                                            [d](double e) { return e >= d; })) /
                          static_cast<double>(err.size());
            t.bound = rec.bound + 2.0 / d * std::sqrt(rec.delta) / std::sqrt(2.0 * std::numbers::pi) *
                                      std::exp(-d * d / (2.0 * rec.delta));
            t.pass = t.empirical <= t.bound;
            rec.pass = rec.pass && t.pass;
            rec.tail.push_back(t);
        }
        all = all && rec.pass;
        rep.horizons.push_back(rec);
    }
    rep.checks["tail_within_bound"] = all;
    rep.checks["gaussian_tail_inequality"] = gaussian_tail_inequality_holds();
    rep.pass = all && rep.checks["gaussian_tail_inequality"];
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

bool gaussian_tail_inequality_holds() {
    for (int i = 1; i <= 50; ++i) {
        const double x = 0.1 * i;
        if (!(normal_tail(x) < normal_pdf(x) / x)) return false;
    }
    return true;
}

} // namespace subfou

#include "subfou/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "subfou/errors.hpp"
#include "subfou/format.hpp"
#include "subfou/io.hpp"
#include "subfou/montecarlo.hpp"
#include "subfou/validation.hpp"

namespace subfou {

namespace {

struct OptionSpec {
    const char* flags;
    const char* key;
    const char* help;
};

const OptionSpec options[] = {
    {"--h", "h", "Hurst index"},
    {"--theta,--theta0", "theta0", "drift parameter (simulate: omit for plain sub-fBm)"},
    {"--t-max", "t_max", "horizon"},
    {"--horizons", "horizons", "comma-separated horizons (Monte Carlo)"},
    {"--steps", "steps", "number of grid steps"},
    {"--dt", "dt", "step size"},
    {"--reps", "reps", "replicates"},
    {"--pilot-reps", "pilot_reps", "replicates of the pilot run"},
    {"--seed", "seed", "master seed"},
    {"--method", "method", "cholesky | fbm_fold | kernel_wiener"},
    {"--scheme", "scheme", "exp_euler | plain_euler"},
    {"--eps0", "eps0", "epsilon schedule scale"},
    {"--kappa", "kappa", "epsilon schedule exponent, in (0, 1/2)"},
    {"--d-values", "d_values", "comma-separated tail thresholds"},
    {"--ks-max", "ks_max", "normality threshold on the final KS distance"},
    {"--normalization-gap", "normalization_gap", "allowed KS gap between normalizations"},
    {"--mc-se", "mc_se", "Monte Carlo slack in standard errors"},
    {"--a", "a", "end of the observation window (predict)"},
    {"--t", "t", "prediction time (predict)"},
    {"--in", "in_path", "input paths CSV"},
    {"--out", "out_path", "output file (default: standard output)"},
    {"--format", "format", "csv | json"},
};

using Settings = std::map<std::string, std::string>;

std::set<std::string> allowed_keys() {
    std::set<std::string> s;
    for (const auto& o : options) s.insert(o.key);
    return s;
}

struct Context {
    Settings s;
    std::ostream& out;
    std::ostream& err;

    bool has(const std::string& k) const { return s.count(k) > 0; }
    std::string str(const std::string& k, const std::string& def) const { return has(k) ? s.at(k) : def; }
    std::string required(const std::string& k) const {
        if (!has(k)) throw ConfigError("missing required setting '" + k + "'");
        return s.at(k);
    }
    double real(const std::string& k, double def) const { return has(k) ? parse_real(k, s.at(k)) : def; }
    double real(const std::string& k) const { return parse_real(k, required(k)); }
    std::size_t count(const std::string& k, std::size_t def) const {
        if (!has(k)) return def;
        const long long v = parse_integer(k, s.at(k));
        if (v < 1) throw ConfigError(k + " must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    std::uint64_t seed() const {
        if (!has("seed")) return SeedPolicy{}.master_seed;
        const long long v = parse_integer("seed", s.at("seed"));
        if (v < 0) throw ConfigError("seed must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    std::string format(const std::string& def) const {
        const auto f = str("format", def);
        if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
        return f;
    }
    HurstParams params() const {
        const double H = real("h");
        if (!(H > 0.0 && H < 1.0)) throw ConfigError("h must lie in (0, 1)");
        return derive_constants(H);
    }
};

// Writes through `write` into --out, or to standard output when no file is given.
template <class W>
void emit(const Context& c, W&& write) {
    if (!c.has("out_path")) {
        write(c.out);
        return;
    }
    std::ofstream f(c.s.at("out_path"), std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + c.s.at("out_path"));
    write(f);
    if (!f) throw ConfigError("failed writing " + c.s.at("out_path"));
}

PathTable read_input(const Context& c) {
    const auto path = c.required("in_path");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open input file " + path);
    return read_paths_csv(f);
}

TimeGrid grid_from(const Context& c) {
    const double T = c.real("t_max", 1.0);
    if (c.has("steps") && c.has("dt")) throw ConfigError("give steps or dt, not both");
    if (c.has("dt")) {
        try {
            return build_grid(T, steps_for(T, c.real("dt")));
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    return build_grid(T, c.count("steps", 1000));
}

int run_simulate(const Context& c) {
    const auto p = c.params();
    const auto grid = grid_from(c);
    const std::size_t reps = c.count("reps", 1);
    const SeedPolicy seeds{c.seed()};
    if (c.format("csv") != "csv") throw ConfigError("simulate writes csv only");
    PathBatch b;
    if (c.has("theta0")) {
        if (c.str("method", "cholesky") != "cholesky")
            throw ConfigError("SFOU paths use the cholesky noise; method must be cholesky");
        b = simulate_sfou(grid, p, c.real("theta0"), reps, seeds, parse_scheme(c.str("scheme", "exp_euler")));
    } else {
        if (c.has("scheme")) throw ConfigError("scheme applies only when theta is given");
        b = simulate_subfbm(grid, p, reps, seeds, parse_method(c.str("method", "cholesky")));
    }
    emit(c, [&](std::ostream& os) { write_paths_csv(os, b); });
    return exit_ok;
}

int run_estimate(const Context& c) {
    const auto p = c.params();
    const auto tab = read_input(c);
    CacheOptions opt;
    opt.kernel_matrices = false;
    const auto cache = build_cache(tab.grid, p, opt);
    std::vector<EstimateRow> rows(tab.rep_ids.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::span<const double> X(tab.values.data() + r * tab.values.cols(), static_cast<std::size_t>(tab.values.cols()));
        rows[r].rep = tab.rep_ids[r];
        try {
            rows[r].result = mle(X, cache);
        } catch (const NumericError& e) {
            throw NumericError("replicate " + std::to_string(tab.rep_ids[r]) + ": " + e.what());
        }
    }
    const auto fmt = c.format("json");
    emit(c, [&](std::ostream& os) { fmt == "json" ? write_estimates_json(os, rows) : write_estimates_csv(os, rows); });
    return exit_ok;
}

int run_predict(const Context& c) {
    const auto p = c.params();
    const auto tab = read_input(c);
    const double a = c.real("a"), t = c.real("t");
    const double dt = tab.grid.dt();
    const double k = std::round(a / dt);
    if (!(a > 0.0) || k < 1 || k > static_cast<double>(tab.grid.n) || std::abs(a / dt - k) > 1e-9 * k)
        throw ConfigError("a must be a positive grid time of the input paths");
    const auto ia = static_cast<std::size_t>(k);
    const auto observed = build_grid(tab.grid.times[ia], ia);
    if (!(t > observed.T)) throw ConfigError("t must exceed a");
    const auto w = prediction_weights(observed, t, p);
    emit(c, [&](std::ostream& os) {
        os << "rep,a,t,prediction\n";
        for (std::size_t r = 0; r < tab.rep_ids.size(); ++r) {
            std::span<const double> z(tab.values.data() + r * tab.values.cols(), ia + 1);
            os << tab.rep_ids[r] << ',' << digits17(observed.T) << ',' << digits17(t) << ','
               << digits17(predict(z, w)) << '\n';
        }
    });
    return exit_ok;
}

McConfig mc_config(const Context& c) {
    McConfig m;
    m.H = c.real("h", m.H);
    m.theta0 = c.real("theta0", m.theta0);
    if (c.has("horizons")) m.horizons = parse_list(c.s.at("horizons"));
    else if (c.has("t_max")) m.horizons = {c.real("t_max")};
    if (c.has("steps")) throw ConfigError("Monte Carlo runs take dt, not steps");
    m.dt = c.real("dt", m.dt);
    m.reps = c.count("reps", m.reps);
    m.pilot_reps = c.count("pilot_reps", m.pilot_reps);
    m.seeds = SeedPolicy{c.seed()};
    m.eps0 = c.real("eps0", m.eps0);
    m.kappa = c.real("kappa", m.kappa);
    if (c.has("d_values")) m.d_values = parse_list(c.s.at("d_values"));
    m.scheme = parse_scheme(c.str("scheme", "exp_euler"));
    m.ks_max = c.real("ks_max", m.ks_max);
    m.normalization_gap = c.real("normalization_gap", m.normalization_gap);
    m.mc_se = c.real("mc_se", m.mc_se);
    if (c.has("method") && c.s.at("method") != "cholesky") throw ConfigError("Monte Carlo runs use the cholesky noise");
    validate(m);
    return m;
}

void print_summary(std::ostream& os, const ExperimentReport& r) {
    os << r.experiment << ": " << (r.pass ? "PASS" : "FAIL") << " (config " << r.config_hash << ", seed " << r.seed
       << ")\n";
    for (const auto& [k, v] : r.checks) os << "  " << k << ": " << (v ? "yes" : "no") << '\n';
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
}

int run_experiment(const Context& c, ExperimentReport (*fn)(const McConfig&)) {
    const auto cfg = mc_config(c);
    const auto rep = fn(cfg);
    const auto fmt = c.format("csv");
    emit(c, [&](std::ostream& os) { fmt == "csv" ? write_report_csv(os, rep) : write_report_json(os, rep); });
    print_summary(c.has("out_path") ? c.out : c.err, rep);
    c.err << "runtime " << shortest(std::round(rep.runtime_seconds * 100) / 100) << " s\n";
    return rep.pass ? exit_ok : exit_experiment;
}

int run_validate(const Context& c) {
    auto checks = kernel_identity_suite();
    bool ok = true;
    for (const auto& r : checks) {
        c.err << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.pass;
    }
    emit(c, [&](std::ostream& os) { write_checks_csv(os, checks); });
    return ok ? exit_ok : exit_experiment;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sub-fBm and SFOU simulation, drift estimation and Monte Carlo checks", "sfou"};
    app.require_subcommand(1, 1);
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "simulate sub-fBm (no theta) or SFOU paths"},
        {"estimate", "drift MLE for every path in --in"},
        {"predict", "conditional mean of zeta_t given the path on [0, a]"},
        {"mc-consistency", "median error and information across horizons"},
        {"mc-normality", "KS distance of the studentized estimator"},
        {"mc-berry-esseen", "KS distance against the computable bound"},
        {"mc-tail", "tail probabilities against the computable bound"},
        {"validate-kernels", "kernel identity checks"},
    };
    std::map<std::string, std::map<std::string, std::optional<std::string>>> values;
    std::map<std::string, std::string> config_path;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
        sub->add_option("--config", config_path[name], "key = value settings file");
        for (const auto& o : options) sub->add_option(o.flags, values[name][o.key], o.help);
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        Context c{{}, out, err};
        if (!config_path[name].empty()) {
            std::ifstream f(config_path[name]);
            if (!f) throw ConfigError("cannot open config file " + config_path[name]);
            c.s = parse_config(f, allowed_keys());
        }
        for (const auto& [k, v] : values[name])
            if (v) c.s[k] = *v;
        if (name == "simulate") return run_simulate(c);
        if (name == "estimate") return run_estimate(c);
        if (name == "predict") return run_predict(c);
        if (name == "mc-consistency") return run_experiment(c, consistency_experiment);
        if (name == "mc-normality") return run_experiment(c, normality_experiment);
        if (name == "mc-berry-esseen") return run_experiment(c, berry_esseen_experiment);
        if (name == "mc-tail") return run_experiment(c, tail_experiment);
        return run_validate(c);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    }
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace subfou

#include "subfou/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "subfou/errors.hpp"
#include "subfou/format.hpp"

namespace subfou {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const char* flag(bool b) { return b ? "true" : "false"; }

} // namespace

void write_paths_csv(std::ostream& os, const PathBatch& b) {
    os << "rep,t,value\n";
    const std::size_t n = b.grid.n;
    std::string line;
    for (std::size_t r = 0; r < b.reps(); ++r)
        for (std::size_t i = 0; i <= n; ++i) {
            line = std::to_string(r);
            line += ',';
            line += digits17(b.grid.times[i]);
            line += ',';
            line += digits17(b.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)));
            line += '\n';
            os << line;
        }
}

double parse_real(const std::string& key, const std::string& s) {
    const std::string v = trim(s);
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(key + ": not a number: '" + s + "'");
    return x;
}

long long parse_integer(const std::string& key, const std::string& s) {
    const std::string v = trim(s);
    long long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(key + ": not an integer: '" + s + "'");
    return x;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real("list", item));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

PathTable read_paths_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "rep,t,value")
        throw ConfigError("paths file must start with the header rep,t,value");
    std::vector<long> reps;
    std::vector<std::vector<double>> times, values;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ConfigError("malformed paths row at line " + std::to_string(lineno));
        const long rep = static_cast<long>(parse_integer("rep", a));
        if (reps.empty() || reps.back() != rep) {
            for (long seen : reps)
                if (seen == rep) throw ConfigError("rows of replicate " + std::to_string(rep) + " are not contiguous");
            reps.push_back(rep);
            times.emplace_back();
            values.emplace_back();
        }
        times.back().push_back(parse_real("t", b));
        values.back().push_back(parse_real("value", c));
    }
    if (reps.empty()) throw ConfigError("paths file has no rows");
    const auto& t0 = times.front();
    if (t0.size() < 3 || t0.front() != 0.0) throw ConfigError("paths must start at t = 0 with at least 2 steps");
    for (std::size_t r = 1; r < reps.size(); ++r)
        if (times[r] != t0) throw ConfigError("replicate " + std::to_string(reps[r]) + " uses a different grid");
    PathTable tab;
    tab.grid = build_grid(t0.back(), t0.size() - 1);
    for (std::size_t i = 0; i < t0.size(); ++i)
        if (std::abs(t0[i] - tab.grid.times[i]) > 1e-9 * tab.grid.T)
            throw ConfigError("paths grid is not uniform");
    tab.rep_ids = reps;
    tab.values.resize(static_cast<Eigen::Index>(reps.size()), static_cast<Eigen::Index>(t0.size()));
    for (std::size_t r = 0; r < reps.size(); ++r)
        for (std::size_t i = 0; i < t0.size(); ++i)
            tab.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = values[r][i];
    return tab;
}

void write_estimates_json(std::ostream& os, const std::vector<EstimateRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        const auto& e = row.result;
        arr.push_back({{"rep", row.rep},
                       {"theta_hat", e.theta_hat},
                       {"obs_info", e.obs_info},
                       {"log_lik", e.log_lik_at_hat},
                       {"T", e.T},
                       {"n", e.n},
                       {"H", e.H}});
    }
    os << arr.dump(2) << '\n';
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows) {
    os << "rep,theta_hat,obs_info,log_lik,T,n,H\n";
    for (const auto& row : rows) {
        const auto& e = row.result;
        os << row.rep << ',' << digits17(e.theta_hat) << ',' << digits17(e.obs_info) << ','
           << digits17(e.log_lik_at_hat) << ',' << digits17(e.T) << ',' << e.n << ',' << digits17(e.H) << '\n';
    }
}

void write_report_csv(std::ostream& os, const ExperimentReport& r) {
    auto d = [](double x) { return digits17(x); };
    if (r.experiment == "consistency") {
        os << "T,median_err,median_info,mean_theta,pass\n";
        for (const auto& h : r.horizons)
            os << d(h.T) << ',' << d(h.median_err) << ',' << d(h.median_info) << ',' << d(h.mean_theta) << ','
               << flag(h.pass) << '\n';
    } else if (r.experiment == "normality") {
        os << "T,ks,ks_u,eta2_hat,mean_info,pass\n";
        for (const auto& h : r.horizons)
            os << d(h.T) << ',' << d(h.ks) << ',' << d(h.ks_u) << ',' << d(h.eta2_hat) << ',' << d(h.mean_info)
               << ',' << flag(h.pass) << '\n';
    } else if (r.experiment == "berry-esseen") {
        os << "T,delta,eps,ks,p_cond,bound,pass\n";
        for (const auto& h : r.horizons)
            os << d(h.T) << ',' << d(h.delta) << ',' << d(h.eps) << ',' << d(h.ks) << ',' << d(h.p_cond) << ','
               << d(h.bound) << ',' << flag(h.pass) << '\n';
    } else if (r.experiment == "tail") {
        os << "T,d,empirical,bound,pass\n";
        for (const auto& h : r.horizons)
            for (const auto& t : h.tail)
                os << d(h.T) << ',' << d(t.d) << ',' << d(t.empirical) << ',' << d(t.bound) << ','
                   << flag(t.pass) << '\n';
    } else {
        throw ConfigError("unknown experiment " + r.experiment);
    }
}

void write_report_json(std::ostream& os, const ExperimentReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;
    j["pass"] = r.pass;
    for (const auto& [k, v] : r.checks) j["check_" + k] = v;
    j["notes"] = r.notes;
    auto hs = nlohmann::ordered_json::array();
    for (const auto& h : r.horizons) {
        nlohmann::ordered_json o{{"T", h.T},
                                 {"steps", h.steps},
                                 {"median_err", h.median_err},
                                 {"median_info", h.median_info},
                                 {"mean_info", h.mean_info},
                                 {"mean_theta", h.mean_theta},
                                 {"eta2_hat", h.eta2_hat},
                                 {"ks", h.ks},
                                 {"ks_s", h.ks_s},
                                 {"ks_u", h.ks_u},
                                 {"ks_gamma", h.ks_gamma},
                                 {"delta", h.delta},
                                 {"eps", h.eps},
                                 {"p_cond", h.p_cond},
                                 {"p_cond_over_sqrt_eps", h.p_ratio},
                                 {"eps2_over_delta", h.growth},
                                 {"bound", h.bound},
                                 {"chain_ok", h.chain_ok},
                                 {"vacuous", h.vacuous},
                                 {"pass", h.pass}};
        for (const auto& t : h.tail) {
            const std::string k = "d=" + shortest(t.d);
            o["tail_empirical_" + k] = t.empirical;
            o["tail_bound_" + k] = t.bound;
        }
        hs.push_back(o);
    }
    j["horizons"] = hs;
    os << j.dump(2) << '\n';
}

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks) {
    os << "check,pass,max_error\n";
    for (const auto& c : checks) os << c.name << ',' << flag(c.pass) << ',' << digits17(c.max_error) << '\n';
}

std::map<std::string, std::string> parse_config(std::istream& is, const std::set<std::string>& allowed) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (!allowed.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!out.emplace(key, value).second) throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    }
    return out;
}

} // namespace subfou

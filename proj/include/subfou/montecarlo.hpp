#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subfou/inference.hpp"
#include "subfou/random.hpp"
#include "subfou/simulate.hpp"

namespace subfou {

struct McConfig {
    double H = 0.7;
    double theta0 = -1.0;
    std::vector<double> horizons{5, 10, 20, 40};
    double dt = 0.02;
    std::size_t reps = 500;
    std::size_t pilot_reps = 200;
    SeedPolicy seeds{};
    double eps0 = 0.4;
    double kappa = 0.25;
    std::vector<double> d_values{0.25, 0.5, 1.0};
    Scheme scheme = Scheme::exp_euler;
    // pass thresholds
    double ks_max = 0.08;              // final studentized KS
    double normalization_gap = 0.03;   // |KS(U) - KS(S)| at the last horizon
    double mc_se = 5.0;                // Monte Carlo slack, in standard errors
};

// Throws ConfigError on the first violated invariant.
void validate(const McConfig& cfg);
// Canonical text of every field, one `key = value` per line; hashed for reports.
std::string canonical_text(const McConfig& cfg);
std::string config_hash(const McConfig& cfg);

// Per-replicate results at every horizon, from one simulation at the largest horizon.
// Horizon prefixes reuse the causal transform, so the value at T equals a fresh run on [0,T].
struct HorizonSample {
    double T = 0.0;
    std::size_t steps = 0;
    std::vector<double> theta_hat, info, score;
};

std::vector<HorizonSample> run_nested(const McConfig& cfg, std::size_t reps, const SeedPolicy& seeds);
// Independent SFOU replicates on [0, T] through mle.
std::vector<EstimationResult> run_replications(const McConfig& cfg, double T);

struct TailRecord {
    double d = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct HorizonRecord {
    double T = 0.0;
    std::size_t steps = 0;
    double median_err = 0.0;
    double median_info = 0.0;
    double mean_info = 0.0;
    double mean_theta = 0.0;
    double delta = 0.0;       // 1 / pilot mean information
    double eps = 0.0;
    double ks = 0.0;          // KS of the experiment's statistic
    double ks_s = 0.0;        // studentized sqrt(info) (theta_hat - theta0)
    double ks_u = 0.0;        // delta^{-1/2} (theta_hat - theta0)
    double ks_gamma = 0.0;    // delta^{1/2} (score - theta0 info)
    double p_cond = 0.0;      // P(|delta info - 1| >= eps)
    double p_ratio = 0.0;     // p_cond / sqrt(eps)
    double growth = 0.0;      // eps^2 / delta
    double bound = 0.0;
    double eta2_hat = 0.0;    // mean information / T
    bool chain_ok = true;
    bool vacuous = false;
    std::vector<TailRecord> tail;
    bool pass = false;
};

struct ExperimentReport {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string config_hash;
    double runtime_seconds = 0.0;  // not written to report files
    std::vector<HorizonRecord> horizons;
    std::map<std::string, bool> checks;
    std::vector<std::string> notes;
    bool pass = false;
};

ExperimentReport consistency_experiment(const McConfig& cfg);
ExperimentReport normality_experiment(const McConfig& cfg);
ExperimentReport berry_esseen_experiment(const McConfig& cfg);
ExperimentReport tail_experiment(const McConfig& cfg);

// 1 - Phi(x) < phi(x) / x on the grid x = 0.1, 0.2, ..., 5.
bool gaussian_tail_inequality_holds();

} // namespace subfou

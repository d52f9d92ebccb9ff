#pragma once
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "subfou/inference.hpp"
#include "subfou/montecarlo.hpp"
#include "subfou/simulate.hpp"
#include "subfou/validation.hpp"

namespace subfou {

// Long format `rep,t,value`, rows sorted by (rep, t), 17 significant digits.
void write_paths_csv(std::ostream& os, const PathBatch& b);

struct PathTable {
    TimeGrid grid;
    RowMatrix values;  // reps x (n+1)
    std::vector<long> rep_ids;
};
// Inverse of write_paths_csv. Every replicate must share one uniform grid starting at 0.
PathTable read_paths_csv(std::istream& is);

struct EstimateRow {
    long rep = 0;
    EstimationResult result;
};
// One flat object per replicate: {rep, theta_hat, obs_info, log_lik, T, n, H}.
void write_estimates_json(std::ostream& os, const std::vector<EstimateRow>& rows);
void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows);

// Report tables. Headers:
//   consistency   T,median_err,median_info,mean_theta,pass
//   normality     T,ks,ks_u,eta2_hat,mean_info,pass
//   berry-esseen  T,delta,eps,ks,p_cond,bound,pass
//   tail          T,d,empirical,bound,pass
void write_report_csv(std::ostream& os, const ExperimentReport& r);
// Flat summary with every per-horizon field; runtime is left out so files are reproducible.
void write_report_json(std::ostream& os, const ExperimentReport& r);

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks);

// `key = value` lines, `#` starts a comment. Unknown or repeated keys are rejected.
std::map<std::string, std::string> parse_config(std::istream& is, const std::set<std::string>& allowed);

std::vector<double> parse_list(const std::string& s);
double parse_real(const std::string& key, const std::string& s);
long long parse_integer(const std::string& key, const std::string& s);

} // namespace subfou

#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace subfou {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_error = 0.0;
    std::string detail;
};

// Constant identities for `samples` random H, and the H = 1/2 degeneracy.
CheckResult check_constants(std::size_t samples = 1000, std::uint64_t seed = 7);
// Self-similarity, ordering against fBm and the increment sandwich on a 20 x 20 grid
// for H in {0.2, 0.4, 0.6, 0.75, 0.9}.
CheckResult check_covariance_properties();
// c_H^2 int n n du against the covariance for t, t' in {0.25, 0.5, 1}, H in {0.6, 0.7, 0.85}.
CheckResult check_representation_identity(double tol = 1e-4);
// The drift operator maps a constant drift to itself.
CheckResult check_fixed_point(double tol = 1e-6);
// Variance of the discretized fundamental martingale on graded partitions of [0,1] with
// n in {128, 256, 512}: error against w_1 below tol at n = 512 and decreasing.
CheckResult check_martingale_variance(double tol = 0.02);

std::vector<CheckResult> kernel_identity_suite();

} // namespace subfou

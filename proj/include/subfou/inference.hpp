#pragma once
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subfou/grid.hpp"
#include "subfou/kernels.hpp"
#include "subfou/simulate.hpp"

namespace subfou {

// innovations: the discrete fundamental martingale. With S = L L^T the increment
//   covariance and v = L^{-1} 1, the innovations e = L^{-1} dX give
//   dZ_k = dt v_k e_k and the discrete clock dV_k = (dt v_k)^2, so Var(Z_i) = V_i exactly
//   under a driftless path. Equivalent to a collocated kernel (collocation_row).
// midpoint: Z_i = sum_{j<i} k_H(t_i, m_j) dX_j with the pointwise kernel (and K_H for
//   the inverse).
enum class TransformMethod { innovations, midpoint };

struct CacheOptions {
    bool kernel_matrices = true;  // midpoint k_H / K_H matrices, O(n^2) memory
    QuadratureSpec quad{};
};

struct TransformCache {
    TimeGrid grid;
    HurstParams params;
    IncrementModel model;
    Eigen::VectorXd v;
    std::vector<double> V, dV;              // discrete clock at t_0..t_n and its increments
    std::vector<double> w_values, dw_values;  // w_t^H at t_0..t_n and its increments
    Eigen::MatrixXd k_matrix, K_matrix;     // (n+1) x n, row i = t_i, column j = midpoint m_j

    bool has_kernel_matrices() const { return k_matrix.size() > 0; }
    // Weights W_j, j < i, with Z_i = sum_j W_j dX_j under the innovations transform.
    Eigen::VectorXd collocation_row(std::size_t i) const;
};

TransformCache build_cache(const TimeGrid& grid, const HurstParams& p, const CacheOptions& opt = {});

std::vector<double> transform_to_Z(std::span<const double> X, const TransformCache& c,
                                   TransformMethod m = TransformMethod::innovations);
std::vector<double> reconstruct_X(std::span<const double> Z, const TransformCache& c,
                                  TransformMethod m = TransformMethod::innovations);
// J at the left points t_0..t_{n-1}: dZ_k = theta J_k dV_k + martingale increment.
std::vector<double> compute_J(std::span<const double> X, const TransformCache& c);

struct Diagnostics {
    int refinement_level = 0;
    std::vector<std::string> warnings;
};

struct EstimationResult {
    double theta_hat = 0.0;
    double obs_info = 0.0;   // sum J_k^2 dV_k
    double score = 0.0;      // sum J_k dZ_k
    double log_lik_at_hat = 0.0;
    double T = 0.0;
    std::size_t n = 0;
    double H = 0.0;
    std::vector<double> J_samples;
    std::vector<double> Z_path;
    Diagnostics diagnostics;
};

// MLE from the first `steps` increments (0 = whole grid).
EstimationResult mle(std::span<const double> X, const TransformCache& c, std::size_t steps = 0);

// Running score and information: A_i = sum_{k<i} J_k dZ_k, B_i = sum_{k<i} J_k^2 dV_k.
struct ScorePath {
    std::vector<double> A, B;
};
ScorePath score_path(std::span<const double> X, const TransformCache& c);

double log_likelihood(double theta, std::span<const double> X, const TransformCache& c);
double likelihood_ratio(double theta, double theta0, std::span<const double> X, const TransformCache& c);

// exp(a M_T - a^2 <M>_T / 2) for a driftless sub-fBm path.
double girsanov_weight(double a, std::span<const double> zeta, const TransformCache& c,
                       TransformMethod m = TransformMethod::innovations);

// Prediction of zeta_t from a path observed on the uniform grid of [0, a].
std::vector<double> prediction_weights(const TimeGrid& observed, double t, const HurstParams& p,
                                       const QuadratureSpec& q = {});
double predict(std::span<const double> zeta, const TimeGrid& observed, double t,
               const HurstParams& p, const QuadratureSpec& q = {});
double predict(std::span<const double> zeta, std::span<const double> weights);

} // namespace subfou

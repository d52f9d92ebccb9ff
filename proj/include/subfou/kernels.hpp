#pragma once
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subfou/quadrature.hpp"

namespace subfou {

struct HurstParams {
    double h = 0.5;
    double c_h = 0.0;
    double d_h = 0.0;
    double lambda_h = 0.0;
    double beta_h = 0.0;
    bool kernel_valid = false;  // H > 1/2
};

HurstParams derive_constants(double H);
void require_kernel(const HurstParams& p);

double cov_subfbm(double s, double t, const HurstParams& p);
double cov_fbm(double s, double t, const HurstParams& p);  // |s|,|t| allowed negative
double increment_variance(double s, double t, const HurstParams& p);

using RealFn = std::function<double(double)>;

// Erdelyi-Kober integrals. The T form integrates over (s,T), the 0 form over (0,s).
double ek_integral_T(const RealFn& f, double s, double T, double alpha, double sigma,
                     double eta, const QuadratureSpec& q = {});
double ek_integral_0(const RealFn& f, double s, double alpha, double sigma, double eta,
                     const QuadratureSpec& q = {});

// Drift operator: maps a drift f to the integrand against the fundamental martingale.
double psi_op(const RealFn& f, double s, const HurstParams& p, const QuadratureSpec& q = {});

// Volterra kernels, zero outside 0 < s < t.
double kernel_n(double t, double s, const HurstParams& p, const QuadratureSpec& q = {});
double kernel_n_ek(double t, double s, const HurstParams& p, const QuadratureSpec& q = {});
double kernel_psi(double t, double s, const HurstParams& p, const QuadratureSpec& q = {});
double kernel_k(double t, double s, const HurstParams& p, const QuadratureSpec& q = {});
double kernel_K(double t, double s, const HurstParams& p, const QuadratureSpec& q = {});

struct Clock {
    double w;
    double dw;  // dw/dt; +inf at t = 0 when H > 1/2
};
Clock w_and_dw(double t, const HurstParams& p);

double prediction_kernel(double u, double a, double t, const HurstParams& p,
                         const QuadratureSpec& q = {});

// c_H^2 * int_0^{min(t,t')} n(t,u) n(t',u) du, which should reproduce cov_subfbm(t,t').
double representation_integral(double t, double tp, const HurstParams& p,
                               const QuadratureSpec& q = {});

// Variance of sum_j k(t, m_j) (zeta(p_{j+1}) - zeta(p_j)) over a partition of [0,t]
// with cell midpoints m_j; compare with w_t.
double kernel_k_quadratic_form(std::span<const double> partition, const HurstParams& p,
                               const QuadratureSpec& q = {});

enum class KernelKind { n, k, K };

// Matrix M with M(i,j) = kernel(t_i, m_j) for j < i and 0 otherwise, where m_j is the
// midpoint of [t_j, t_{j+1}]. Shape (times.size()) x (times.size() - 1).
Eigen::MatrixXd kernel_matrix(KernelKind kind, std::span<const double> times,
                              const HurstParams& p, const QuadratureSpec& q = {});

} // namespace subfou

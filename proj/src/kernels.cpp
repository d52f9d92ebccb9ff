#include "subfou/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "subfou/errors.hpp"
#include "subfou/special.hpp"

namespace subfou {

namespace {

constexpr double pi = std::numbers::pi;

bool is_integer(double x) { return x == std::round(x); }

Endpoint endpoint_for(double exponent) {
    return is_integer(exponent) && exponent >= 0.0 ? Endpoint::regular()
                                                   : Endpoint::power(exponent);
}

// 2^{3/2-H} sqrt(pi) / Gamma(H-1/2): normalisation of n_H.
double n_constant(double H) {
    return std::pow(2.0, 1.5 - H) * std::sqrt(pi) / gamma_fn(H - 0.5);
}

// int_{r2}^1 y^{-H} (1-y)^{H-3/2} dy
double n_integral(double r2, double H, const QuadratureSpec& q) {
    auto g = [H](double y, double, double db) { return std::pow(y, -H) * std::pow(db, H - 1.5); };
    return integrate_value(g, r2, 1.0, Endpoint::power(-H), Endpoint::power(H - 1.5), q);
}

// int_{r2}^1 y^{H-1} (1-y)^{1/2-H} dy
double k_integral(double r2, double H, const QuadratureSpec& q) {
    auto g = [H](double y, double, double db) {
        return std::pow(y, H - 1.0) * std::pow(db, 0.5 - H);
    };
    return integrate_value(g, r2, 1.0, Endpoint::power(H - 1.0), Endpoint::power(0.5 - H), q);
}

double psi_from_integral(double t, double s, double ik, const HurstParams& p) {
    const double H = p.h;
    const double edge = std::pow((t - s) * (t + s), 0.5 - H) / t;
    return p.d_h * std::pow(s, H + 0.5) * (edge + 0.5 * std::pow(s, -2.0 * H) * ik);
}

void check_time(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw DomainError(std::string(name) + " must be a finite non-negative time");
}

} // namespace

HurstParams derive_constants(double H) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("H must lie in (0,1), got " + std::to_string(H));
    HurstParams p;
    p.h = H;
    p.kernel_valid = H > 0.5;
    if (H == 0.5) {
        p.c_h = std::numbers::inv_sqrtpi;
        p.d_h = 1.0;
        p.lambda_h = 1.0;
        p.beta_h = 1.0;
        return p;
    }
    p.c_h = std::sqrt(gamma_fn(2.0 * H + 1.0) * std::sin(pi * H) / pi);
    p.d_h = std::pow(2.0, H - 0.5) / (p.c_h * gamma_fn(1.5 - H) * std::sqrt(pi));
    p.lambda_h = p.d_h * p.d_h / (2.0 - 2.0 * H);
    p.beta_h = 2.0 - std::pow(2.0, 2.0 * H - 1.0);
    return p;
}

void require_kernel(const HurstParams& p) {
    if (!p.kernel_valid)
        throw DomainError("kernel operations need H > 1/2, got H = " + std::to_string(p.h));
}

double cov_subfbm(double s, double t, const HurstParams& p) {
    check_time(s, "s");
    check_time(t, "t");
    if (p.h == 0.5) return std::min(s, t);
    const double e = 2.0 * p.h;
    return std::pow(s, e) + std::pow(t, e) - 0.5 * (std::pow(s + t, e) + std::pow(std::abs(s - t), e));
}

double cov_fbm(double s, double t, const HurstParams& p) {
    const double e = 2.0 * p.h;
    return 0.5 * (std::pow(std::abs(s), e) + std::pow(std::abs(t), e) - std::pow(std::abs(s - t), e));
}

double increment_variance(double s, double t, const HurstParams& p) {
    check_time(s, "s");
    if (s > t) throw DomainError("increment_variance needs s <= t");
    const double e = 2.0 * p.h;
    return std::pow(t - s, e) + std::pow(t + s, e) -
           std::pow(2.0, e - 1.0) * (std::pow(t, e) + std::pow(s, e));
}

double ek_integral_T(const RealFn& f, double s, double T, double alpha, double sigma,
                     double eta, const QuadratureSpec& q) {
    if (!(alpha > 0.0)) throw DomainError("ek_integral_T: alpha must be positive");
    if (!(s > 0.0) || s > T) throw DomainError("ek_integral_T needs 0 < s <= T");
    if (s == T) return 0.0;
    const double ls = std::log(s);
    const double ss = std::exp(sigma * ls);
    auto g = [&](double t, double da, double) {
        const double diff = ss * std::expm1(sigma * std::log1p(da / s));
        return std::pow(t, sigma * (1.0 - alpha - eta) - 1.0) * f(t) * std::pow(diff, alpha - 1.0);
    };
    const double I = integrate_value(g, s, T, endpoint_for(alpha - 1.0), Endpoint::regular(), q);
    return sigma * std::exp(sigma * eta * ls) / gamma_fn(alpha) * I;
}

double ek_integral_0(const RealFn& f, double s, double alpha, double sigma, double eta,
                     const QuadratureSpec& q) {
    if (!(alpha > 0.0)) throw DomainError("ek_integral_0: alpha must be positive");
    if (!(s > 0.0)) throw DomainError("ek_integral_0 needs s > 0");
    const double ls = std::log(s);
    const double ss = std::exp(sigma * ls);
    auto g = [&](double t, double, double db) {
        const double diff = -ss * std::expm1(sigma * std::log1p(-db / s));
        return std::pow(t, sigma * (1.0 + eta) - 1.0) * f(t) * std::pow(diff, alpha - 1.0);
    };
    const double I = integrate_value(g, 0.0, s, endpoint_for(sigma * (1.0 + eta) - 1.0),
                                     endpoint_for(alpha - 1.0), q);
    return sigma * std::exp(-sigma * (alpha + eta) * ls) / gamma_fn(alpha) * I;
}

double psi_op(const RealFn& f, double s, const HurstParams& p, const QuadratureSpec& q) {
    require_kernel(p);
    return ek_integral_0(f, s, p.h - 0.5, 2.0, 0.5 - p.h, q) / gamma_fn(1.5 - p.h);
}

double kernel_n(double t, double s, const HurstParams& p, const QuadratureSpec& q) {
    require_kernel(p);
    if (!(s > 0.0) || s >= t) return 0.0;
    const double r = s / t;
    return 0.5 * n_constant(p.h) * std::pow(s, p.h - 0.5) * n_integral(r * r, p.h, q);
}

double kernel_n_ek(double t, double s, const HurstParams& p, const QuadratureSpec& q) {
    require_kernel(p);
    if (!(s > 0.0) || s >= t) return 0.0;
    const double H = p.h;
    auto f = [H](double u) { return std::pow(u, H - 0.5); };
    return std::sqrt(pi) / std::pow(2.0, H - 0.5) *
           ek_integral_T(f, s, t, H - 0.5, 2.0, (3.0 - 2.0 * H) / 4.0, q);
}

double kernel_psi(double t, double s, const HurstParams& p, const QuadratureSpec& q) {
    require_kernel(p);
    if (!(s > 0.0) || s >= t) return 0.0;
    const double r = s / t;
    return psi_from_integral(t, s, k_integral(r * r, p.h, q), p);
}

double kernel_k(double t, double s, const HurstParams& p, const QuadratureSpec& q) {
    if (!(s > 0.0) || s >= t) {
        require_kernel(p);
        return 0.0;
    }
    return p.d_h * std::pow(s, 0.5 - p.h) * kernel_psi(t, s, p, q);
}

double kernel_K(double t, double s, const HurstParams& p, const QuadratureSpec& q) {
    if (!(s > 0.0) || s >= t) {
        require_kernel(p);
        return 0.0;
    }
    return p.c_h / p.d_h * std::pow(s, p.h - 0.5) * kernel_n(t, s, p, q);
}

Clock w_and_dw(double t, const HurstParams& p) {
    check_time(t, "t");
    const double e = 2.0 - 2.0 * p.h;
    const double w = p.lambda_h * std::pow(t, e);
    if (t == 0.0 && p.h > 0.5) return {w, std::numeric_limits<double>::infinity()};
    return {w, p.lambda_h * e * std::pow(t, 1.0 - 2.0 * p.h)};
}

double prediction_kernel(double u, double a, double t, const HurstParams& p,
                         const QuadratureSpec& q) {
    if (!(u > 0.0 && u < a && a <= t))
        throw DomainError("prediction_kernel needs 0 < u < a <= t");
    const double H = p.h;
    if (H == 0.5 || a == t) return 0.0;
    // z - u = (a-u) e^l, so z - a = (a-u) expm1(l)
    const double au = a - u;
    const double lmax = std::log((t - u) / au);
    auto g = [&](double, double l, double) {
        const double za = au * std::expm1(l);
        const double z = a + za;
        return std::pow(za * (z + a), H - 0.5) / (z + u);
    };
    const double I = integrate_value(g, 0.0, lmax, endpoint_for(H - 0.5), Endpoint::regular(), q);
    return 2.0 * std::sin(pi * (H - 0.5)) / pi * u * std::pow(au * (a + u), 0.5 - H) * I;
}

double representation_integral(double t, double tp, const HurstParams& p, const QuadratureSpec& q) {
    require_kernel(p);
    const double m = std::min(t, tp);
    if (!(m > 0.0)) return 0.0;
    auto g = [&](double u, double, double) { return kernel_n(t, u, p, q) * kernel_n(tp, u, p, q); };
    const Endpoint right = t == tp ? Endpoint::power(2.0 * p.h - 1.0) : Endpoint::power(p.h - 0.5);
    return p.c_h * p.c_h * integrate_value(g, 0.0, m, Endpoint::power(2.0 * p.h - 1.0), right, q);
}

double kernel_k_quadratic_form(std::span<const double> partition, const HurstParams& p,
                               const QuadratureSpec& q) {
    require_kernel(p);
    if (partition.size() < 2 || partition.front() != 0.0)
        throw DomainError("partition must start at 0 and have at least one cell");
    const std::size_t n = partition.size() - 1;
    const double t = partition.back();
    std::vector<double> kv(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(partition[j + 1] > partition[j])) throw DomainError("partition must be increasing");
        kv[j] = kernel_k(t, 0.5 * (partition[j] + partition[j + 1]), p, q);
    }
    Eigen::MatrixXd C(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            C(i, j) = C(j, i) = cov_subfbm(partition[i], partition[j], p);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            row += (C(i + 1, j + 1) - C(i, j + 1) - C(i + 1, j) + C(i, j)) * kv[j];
        total += kv[i] * row;
    }
    return total;
}

Eigen::MatrixXd kernel_matrix(KernelKind kind, std::span<const double> times, const HurstParams& p,
                              const QuadratureSpec& q) {
    require_kernel(p);
    if (times.size() < 2 || times.front() < 0.0) throw DomainError("kernel_matrix needs a grid");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw DomainError("kernel_matrix grid must be increasing");
    const std::size_t N = times.size() - 1;
    const double H = p.h;
    const bool k_type = kind == KernelKind::k;
    const double el = k_type ? H - 1.0 : -H;
    const double er = k_type ? 0.5 - H : H - 1.5;
    auto g = [el, er](double y, double, double db) { return std::pow(y, el) * std::pow(db, er); };
    auto g_cell = [el, er](double y, double, double) { return std::pow(y, el) * std::pow(1.0 - y, er); };

    QuadratureSpec cell = q;
    cell.panels = std::max(4, q.panels / 32);
    cell.max_refinements = q.max_refinements + 4;

    const double A = 0.5 * n_constant(H);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N);
    for (std::size_t j = 0; j < N; ++j) {
        const double s = 0.5 * (times[j] + times[j + 1]);
        double prev_r2 = 1.0;
        double cum = 0.0;
        for (std::size_t i = j + 1; i <= N; ++i) {
            const double t = times[i];
            const double r2 = (s / t) * (s / t);
            try {
                if (i == j + 1)
                    cum = integrate_value(g, r2, 1.0, Endpoint::power(el), Endpoint::power(er), q);
                else
                    cum += integrate_value(g_cell, r2, prev_r2, Endpoint::regular(), Endpoint::regular(), cell);
            } catch (const QuadratureError& e) {
                throw QuadratureError("kernel_matrix cell (" + std::to_string(i) + "," +
                                          std::to_string(j) + "): " + e.what(),
                                      e.previous(), e.last());
            }
            prev_r2 = r2;
            switch (kind) {
            case KernelKind::n: M(i, j) = A * std::pow(s, H - 0.5) * cum; break;
            case KernelKind::K: M(i, j) = p.c_h / p.d_h * A * cum * std::pow(s, 2.0 * H - 1.0); break;
            case KernelKind::k: M(i, j) = p.d_h * std::pow(s, 0.5 - H) * psi_from_integral(t, s, cum, p); break;
            }
        }
    }
    return M;
}

} // namespace subfou

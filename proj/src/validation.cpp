#include "subfou/validation.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>

#include "subfou/format.hpp"
#include "subfou/grid.hpp"
#include "subfou/kernels.hpp"

namespace subfou {

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::string sig4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

} // namespace

CheckResult check_constants(std::size_t samples, std::uint64_t seed) {
    CheckResult r{"constants", true, 0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(1e-3, 1.0 - 1e-3);
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < samples; ++i) {
        const double H = U(rng);
        const auto p = derive_constants(H);
        const double c2 = std::tgamma(2 * H + 1) * std::sin(pi * H) / pi;
        const double d = std::pow(2.0, H - 0.5) / (p.c_h * std::tgamma(1.5 - H) * std::sqrt(pi));
        const double lam = p.d_h * p.d_h / (2 - 2 * H);
        const double beta = 2.0 - std::pow(2.0, 2 * H - 1);
        r.max_error = std::max({r.max_error, rel(p.c_h * p.c_h, c2), rel(p.d_h, d), rel(p.lambda_h, lam),
                                rel(p.beta_h, beta)});
    }
    const auto half = derive_constants(0.5);
    bool degenerate = half.d_h == 1.0 && half.lambda_h == 1.0 && half.beta_h == 1.0;
    for (double s : {0.0, 0.1, 0.5, 1.0, 3.7})
        for (double t : {0.0, 0.2, 0.5, 2.0, 10.0}) degenerate = degenerate && cov_subfbm(s, t, half) == std::min(s, t);
    r.pass = r.max_error < 1e-12 && degenerate;
    r.detail = "max relative error " + shortest(r.max_error) + (degenerate ? "" : "; H=1/2 degeneracy broken");
    return r;
}

CheckResult check_covariance_properties() {
    CheckResult r{"covariance", true, 0.0, {}};
    std::size_t failures = 0;
    for (double H : {0.2, 0.4, 0.6, 0.75, 0.9}) {
        const auto p = derive_constants(H);
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                const double s = 0.25 * i, t = 0.25 * j;
                const double c = cov_subfbm(s, t, p), f = cov_fbm(s, t, p);
                if (!(c > 0.0) || (H > 0.5 ? !(c < f) : !(c > f))) ++failures;
                if (s < t) {
                    const double v = increment_variance(s, t, p), d = std::pow(t - s, 2 * H);
                    const bool ok = H > 0.5 ? p.beta_h * d <= v && v <= d : d <= v && v <= p.beta_h * d;
                    if (!ok) ++failures;
                }
                for (double a : {0.5, 2.0, 10.0})
                    r.max_error = std::max(r.max_error, rel(cov_subfbm(a * s, a * t, p), std::pow(a, 2 * H) * c));
            }
    }
    r.pass = failures == 0 && r.max_error < 1e-12;
    r.detail = std::to_string(failures) + " ordering/sandwich failures, self-similarity error " +
               shortest(r.max_error);
    return r;
}

CheckResult check_representation_identity(double tol) {
    CheckResult r{"representation", true, 0.0, {}};
    const double pts[] = {0.25, 0.5, 1.0};
    for (double H : {0.6, 0.7, 0.85}) {
        const auto p = derive_constants(H);
        for (double t : pts)
            for (double tp : pts)
                r.max_error = std::max(r.max_error,
                                       std::abs(representation_integral(t, tp, p) - cov_subfbm(t, tp, p)));
    }
    r.pass = r.max_error <= tol;
    r.detail = "max absolute error " + shortest(r.max_error);
    return r;
}

CheckResult check_fixed_point(double tol) {
    CheckResult r{"fixed_point", true, 0.0, {}};
    for (double H : {0.55, 0.7, 0.9}) {
        const auto p = derive_constants(H);
        for (double s : {0.05, 0.5, 2.0, 10.0})
            r.max_error = std::max(r.max_error, rel(psi_op([](double) { return 1.0; }, s, p), 1.0));
    }
    r.pass = r.max_error <= tol;
    r.detail = "max relative error " + shortest(r.max_error);
    return r;
}

CheckResult check_martingale_variance(double tol) {
    CheckResult r{"martingale_variance", true, 0.0, {}};
    for (double H : {0.6, 0.7, 0.85}) {
        const auto p = derive_constants(H);
        const double w = w_and_dw(1.0, p).w;
        double prev = INFINITY;
        r.detail += "H=" + shortest(H) + ":";
        for (std::size_t n : {128, 256, 512}) {
            const double err = rel(kernel_k_quadratic_form(graded_partition(1.0, n, 3.0), p), w);
            r.detail += " " + sig4(err);
            if (!(err < prev)) r.pass = false;
            prev = err;
        }
        r.detail += "; ";
        r.max_error = std::max(r.max_error, prev);
    }
    r.pass = r.pass && r.max_error < tol;
    r.detail += "relative errors by n = 128, 256, 512";
    return r;
}

std::vector<CheckResult> kernel_identity_suite() {
    return {check_constants(), check_covariance_properties(), check_representation_identity(),
            check_fixed_point()};
}

} // namespace subfou

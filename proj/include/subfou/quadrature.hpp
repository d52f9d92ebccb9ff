#pragma once
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "subfou/errors.hpp"

namespace subfou {

struct QuadratureSpec {
    int panels = 256;
    int refinement_factor = 2;
    double rel_tol = 1e-6;
    int max_refinements = 8;
    int singular_panels = 32;  // starting count for the tanh-sinh variable
};

void validate(const QuadratureSpec& q);

// Local behaviour of an integrand near one endpoint: ~ |x - end|^exponent.
struct Endpoint {
    bool singular = false;
    double exponent = 0.0;

    static Endpoint regular() { return {}; }
    static Endpoint power(double beta) { return {true, beta}; }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int refinements = 0;
};

namespace detail {

// f receives (x, x - a, b - x); the distances are exact even when x rounds to an endpoint.
template <class F>
double midpoint_pass(F& f, double a, double b, long panels) {
    const double width = b - a;
    const double h = width / static_cast<double>(panels);
    double sum = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double da = (static_cast<double>(i) + 0.5) * h;
        sum += f(a + da, da, width - da);
    }
    return sum * h;
}

// Midpoint rule in tau after x = c + L tanh(pi/2 sinh tau), which clusters nodes
// double-exponentially at both ends and absorbs algebraic endpoint singularities.
template <class F>
double tanh_sinh_pass(F& f, double a, double b, long panels, double tau_max) {
    const double L = 0.5 * (b - a);
    const double h = 2.0 * tau_max / static_cast<double>(panels);
    double sum = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double tau = -tau_max + (static_cast<double>(i) + 0.5) * h;
        const double z = 0.5 * std::numbers::pi * std::sinh(tau);
        const double e = std::exp(-2.0 * std::abs(z));
        const double near = 2.0 * L * e / (1.0 + e);
        const double jac = L * 0.5 * std::numbers::pi * std::cosh(tau) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if (near <= 0.0 || jac <= 0.0) continue;
        if (tau < 0.0)
            sum += f(a + near, near, 2.0 * L - near) * jac;
        else
            sum += f(b - near, 2.0 * L - near, near) * jac;
    }
    return sum * h;
}

inline double tanh_sinh_range(Endpoint left, Endpoint right) {
    // the transformed integrand decays like exp(-2 z (1 + beta)); cut at exp(-42)
    auto zneed = [](Endpoint e) {
        return 21.0 / (1.0 + (e.singular ? std::min(e.exponent, 0.0) : 0.0));
    };
    const double z = std::min(300.0, std::max(zneed(left), zneed(right)));
    return std::asinh(2.0 * z / std::numbers::pi);
}

} // namespace detail

// Composite midpoint with panel refinement until two successive estimates agree to
// rel_tol. Regular integrands use the plain rule with Richardson extrapolation
// (h^2 error model). Singular endpoints switch to the tanh-sinh variable, where
// convergence is exponential and the finest estimate is returned as is.
// Endpoints are never evaluated.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, Endpoint left, Endpoint right,
                           const QuadratureSpec& q) {
    QuadratureResult res;
    if (!(b > a)) return res;
    for (const auto& e : {left, right})
        if (e.singular && !(e.exponent > -1.0))
            throw DomainError("non-integrable endpoint exponent " + std::to_string(e.exponent));
    const bool de = left.singular || right.singular;
    const double tau_max = de ? detail::tanh_sinh_range(left, right) : 0.0;
    auto pass = [&](long n) {
        return de ? detail::tanh_sinh_pass(f, a, b, n, tau_max) : detail::midpoint_pass(f, a, b, n);
    };
    const double r = static_cast<double>(q.refinement_factor);
    const double rich = de ? 0.0 : 1.0 / (r * r - 1.0);
    long panels = de ? q.singular_panels : q.panels;
    double prev = pass(panels);
    for (int k = 1; k <= q.max_refinements; ++k) {
        panels *= q.refinement_factor;
        const double cur = pass(panels);
        if (!std::isfinite(cur)) throw QuadratureError("non-finite integrand", prev, cur);
        const double diff = cur - prev;
        if (std::abs(diff) <= q.rel_tol * std::abs(cur)) {
            res.value = cur + diff * rich;
            res.error = std::abs(diff);
            res.refinements = k;
            return res;
        }
        if (k == q.max_refinements)
            throw QuadratureError("midpoint refinement did not converge", prev, cur);
        prev = cur;
    }
    throw QuadratureError("midpoint refinement did not run", prev, prev);
}

template <class F>
double integrate_value(F&& f, double a, double b, Endpoint left, Endpoint right,
                       const QuadratureSpec& q) {
    return integrate(std::forward<F>(f), a, b, left, right, q).value;
}

} // namespace subfou

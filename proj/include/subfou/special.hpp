#pragma once
#include <cmath>
#include <numbers>

namespace subfou {

inline double gamma_fn(double x) { return std::tgamma(x); }
inline double beta_fn(double a, double b) { return std::beta(a, b); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

} // namespace subfou

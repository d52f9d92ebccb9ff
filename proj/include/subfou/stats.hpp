#pragma once
#include <span>
#include <vector>

namespace subfou {

// sup_x |F_n(x) - Phi(x)|
double ks_statistic(std::span<const double> samples);
double median(std::span<const double> x);
double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double std_error(std::span<const double> x);

} // namespace subfou

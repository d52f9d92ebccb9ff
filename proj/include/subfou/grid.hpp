#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace subfou {

struct TimeGrid {
    double T = 0.0;
    std::size_t n = 0;
    std::vector<double> times;

    double dt() const { return T / static_cast<double>(n); }
    double midpoint(std::size_t j) const { return 0.5 * (times[j] + times[j + 1]); }
    std::span<const double> view() const { return times; }
};

TimeGrid build_grid(double T, std::size_t n);

// Number of uniform steps of size dt that make up horizon T (T must be a multiple of dt).
std::size_t steps_for(double T, double dt);

// Partition 0 = p_0 < ... < p_n = T with p_i = T (i/n)^g, refined toward 0.
std::vector<double> graded_partition(double T, std::size_t n, double g);

} // namespace subfou

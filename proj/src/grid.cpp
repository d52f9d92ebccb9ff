#include "subfou/grid.hpp"

#include <cmath>

#include "subfou/errors.hpp"

namespace subfou {

TimeGrid build_grid(double T, std::size_t n) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid horizon T must be positive");
    if (n < 2) throw DomainError("grid needs at least 2 steps");
    TimeGrid g;
    g.T = T;
    g.n = n;
    g.times.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        g.times[i] = T * static_cast<double>(i) / static_cast<double>(n);
    g.times[n] = T;
    return g;
}

std::size_t steps_for(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw DomainError("horizon and dt must be positive");
    const double r = T / dt;
    const double k = std::round(r);
    if (k < 2.0 || std::abs(r - k) > 1e-9 * k)
        throw DomainError("horizon " + std::to_string(T) + " is not a multiple of dt " +
                          std::to_string(dt));
    return static_cast<std::size_t>(k);
}

std::vector<double> graded_partition(double T, std::size_t n, double g) {
    if (!(T > 0.0) || n < 1 || !(g >= 1.0)) throw DomainError("bad graded partition");
    std::vector<double> p(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        p[i] = T * std::pow(static_cast<double>(i) / static_cast<double>(n), g);
    p[n] = T;
    return p;
}

} // namespace subfou

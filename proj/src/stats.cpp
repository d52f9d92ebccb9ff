#include "subfou/stats.hpp"

#include <algorithm>
#include <cmath>

#include "subfou/errors.hpp"
#include "subfou/special.hpp"

namespace subfou {

double ks_statistic(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("ks_statistic: empty sample");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = normal_cdf(s[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

double median(std::span<const double> x) {
    if (x.empty()) throw DomainError("median: empty sample");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size() / 2;
    return s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean: empty sample");
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("variance needs at least 2 samples");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size() - 1);
}

double std_error(std::span<const double> x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

} // namespace subfou

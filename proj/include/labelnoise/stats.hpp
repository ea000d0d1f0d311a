// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_STATS_HPP
#define LABELNOISE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace labelnoise {

/// Order statistic with linear interpolation between closest ranks:
/// rank r = (n-1)*q, result = v[floor(r)] + frac(r) * (v[floor(r)+1] - v[floor(r)]).
inline double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile: empty input");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    const double r = static_cast<double>(values.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(r);
    const double frac = r - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Population standard deviation.
inline double stddev_population(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace labelnoise

#endif

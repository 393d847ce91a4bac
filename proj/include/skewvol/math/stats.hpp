/*
 * Copyright 2026 The skewvol authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SKEWVOL_MATH_STATS_HPP
#define SKEWVOL_MATH_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace skewvol::math {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

/// Empirical quantile with linear interpolation of order statistics
/// (the "type 7" convention). Input must already be sorted.
inline double quantile_sorted(std::span<const double> sorted, double tau) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("quantile_sorted: tau outside (0,1)");
    const double idx = tau * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::span<const double> x, double tau) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, tau);
}

} // namespace skewvol::math

#endif // SKEWVOL_MATH_STATS_HPP

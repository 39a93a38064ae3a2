#include "solarsched/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace solarsched {

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    p = std::clamp(p, 0.0, 1.0);
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    return sorted_quantile(v, p);
}

}  // namespace solarsched

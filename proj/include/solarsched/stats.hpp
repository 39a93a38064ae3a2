#pragma once

#include <span>

namespace solarsched {

// Empirical quantile of already-sorted values, linearly interpolating
// between order statistics at position (n-1)p. Empty input returns NaN.
double sorted_quantile(std::span<const double> sorted, double p);

// Copies, sorts and forwards to sorted_quantile. NaNs are dropped.
double quantile(std::span<const double> values, double p);

}  // namespace solarsched

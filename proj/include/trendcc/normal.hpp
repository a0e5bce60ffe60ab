#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace trendcc {

inline double normal_pdf(double x) noexcept {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

/// Standard normal CDF. Infinite arguments map to exactly 0 or 1.
inline double normal_cdf(double x) noexcept {
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    return 0.5 * std::erfc(-x * (0.5 * std::numbers::sqrt2));
}

/// P(lo < Z < hi) for standard normal Z, using upper tails when both
/// bounds are positive so that mass far in the right tail is not lost.
inline double normal_interval(double lo, double hi) noexcept {
    if (lo > 0.0) return normal_cdf(-lo) - normal_cdf(-hi);
    return normal_cdf(hi) - normal_cdf(lo);
}

/// Inverse standard normal CDF (Wichura's AS 241, about 1e-16 relative accuracy).
/// p outside (0,1) returns the corresponding infinity.
double normal_quantile(double p) noexcept;

} // namespace trendcc

#pragma once

namespace trendcc {

/// P(X > h, Y > k) for a standard bivariate normal with correlation r,
/// |r| <= 1. Infinite h or k are handled exactly. Drezner-Wesolowsky with
/// Genz's Gauss-Legendre refinements; absolute accuracy about 1e-15.
double bvn_upper(double h, double k, double r) noexcept;

/// P(lo1 < X < hi1, lo2 < Y < hi2) for a standard bivariate normal.
double bvn_rect(double lo1, double hi1, double lo2, double hi2, double r) noexcept;

} // namespace trendcc

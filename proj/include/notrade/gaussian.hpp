#pragma once

#include <cmath>
#include <numbers>

namespace notrade {

inline constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
// 1 / sqrt(2 pi e): the maximum of |y f(y)|, attained at y = +-1.
inline const double kInvSqrt2PiE = kInvSqrt2Pi * std::exp(-0.5);

// Half-width of the signal-space box; Gaussian mass outside is below 2e-9.
inline constexpr double kTruncation = 6.0;

inline double std_normal_pdf(double y) noexcept {
  return kInvSqrt2Pi * std::exp(-0.5 * y * y);
}

inline double std_normal_cdf(double y) noexcept {
  return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

/// P(a < Y < b) for a standard normal Y, signed (negative when b < a).
/// Evaluated on the tail side of the origin so far-tail differences keep precision.
inline double gaussian_mass(double a, double b) noexcept {
  if (a > 0.0 && b > 0.0)
    return std_normal_cdf(-a) - std_normal_cdf(-b);
  return std_normal_cdf(b) - std_normal_cdf(a);
}

}  // namespace notrade

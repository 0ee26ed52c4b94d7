#pragma once

// Small double-double helpers shared by the torus kernels.

#include <cmath>

namespace modwalk::dd {

inline constexpr double kBelowOne = 0x1.fffffffffffffp-1;

/// s + err == a + b exactly.
inline void two_sum(double a, double b, double& s, double& err) noexcept {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

/// Same, assuming |a| >= |b|.
inline void fast_two_sum(double a, double b, double& s, double& err) noexcept {
  s = a + b;
  err = b - (s - a);
}

/// x - floor(x), clamped below 1 so rounding never yields 1.0.
inline double frac(double x) noexcept {
  x -= std::floor(x);
  return x >= 1.0 ? kBelowOne : x;
}

/// A point hi + lo of the torus as the signed offset from the nearest
/// integer, in [-1/2, 1/2]. hi - 1 is exact for hi in [1/2, 1).
inline double signed_offset(double hi, double lo) noexcept {
  return (hi >= 0.5 ? hi - 1.0 : hi) + lo;
}

}  // namespace modwalk::dd

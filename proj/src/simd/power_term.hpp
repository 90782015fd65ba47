#pragma once

#include <cmath>

namespace cogharvest::simd::detail {

// d2^-k for integer k >= 1, evaluated as 1 / (d2 * d2 * ... * d2). Vector
// variants perform the same multiplications in the same order.
inline double inverse_power_int(double d2, int k) {
  double p = d2;
  for (int i = 1; i < k; ++i) p *= d2;
  return 1.0 / p;
}

inline double inverse_power(double d2, int k, double half_alpha) {
  return k > 0 ? inverse_power_int(d2, k) : std::pow(d2, -half_alpha);
}

}  // namespace cogharvest::simd::detail

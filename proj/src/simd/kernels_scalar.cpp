#include <algorithm>
#include <limits>

#include "cogharvest/simd/kernels.hpp"
#include "power_term.hpp"

namespace cogharvest::simd {

namespace {

double sum_inverse_power_scalar(const double* d2, std::size_t n, double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += detail::inverse_power(d2[i], k, half_alpha);
  return acc;
}

double shot_noise_sum_scalar(const double* xs, const double* ys, std::size_t n, double ax, double ay,
                             double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    acc += detail::inverse_power(dx * dx + dy * dy, k, half_alpha);
  }
  return acc;
}

double min_sq_distance_scalar(const double* xs, const double* ys, std::size_t n, double ax, double ay) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    best = std::min(best, dx * dx + dy * dy);
  }
  return best;
}

}  // namespace

int integer_half_alpha(double half_alpha) {
  for (int k = 1; k <= kMaxIntegerHalfAlpha; ++k) {
    if (half_alpha == static_cast<double>(k)) return k;
  }
  return 0;
}

namespace detail {
const KernelTable kScalarTable{KernelBackend::Scalar, &sum_inverse_power_scalar,
                               &shot_noise_sum_scalar, &min_sq_distance_scalar};
}  // namespace detail

}  // namespace cogharvest::simd

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "cogharvest/simd/kernels.hpp"
#include "power_term.hpp"

namespace cogharvest::simd {

namespace {

inline float64x2_t inverse_power_int(float64x2_t d2, int k) {
  float64x2_t p = d2;
  for (int i = 1; i < k; ++i) p = vmulq_f64(p, d2);
  return vdivq_f64(vdupq_n_f64(1.0), p);
}

inline float64x2_t sq_distance(const double* xs, const double* ys, float64x2_t ax, float64x2_t ay) {
  const float64x2_t dx = vsubq_f64(vld1q_f64(xs), ax);
  const float64x2_t dy = vsubq_f64(vld1q_f64(ys), ay);
  return vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
}

inline double horizontal_sum(float64x2_t a, float64x2_t b) {
  return (vgetq_lane_f64(a, 0) + vgetq_lane_f64(a, 1)) + (vgetq_lane_f64(b, 0) + vgetq_lane_f64(b, 1));
}

double sum_inverse_power_neon(const double* d2, std::size_t n, double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  if (k == 0) return detail::kScalarTable.sum_inverse_power(d2, n, half_alpha);

  float64x2_t acc_lo = vdupq_n_f64(0.0);
  float64x2_t acc_hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc_lo = vaddq_f64(acc_lo, inverse_power_int(vld1q_f64(d2 + i), k));
    acc_hi = vaddq_f64(acc_hi, inverse_power_int(vld1q_f64(d2 + i + 2), k));
  }
  double acc = horizontal_sum(acc_lo, acc_hi);
  for (; i < n; ++i) acc += detail::inverse_power_int(d2[i], k);
  return acc;
}

double shot_noise_sum_neon(const double* xs, const double* ys, std::size_t n, double ax, double ay,
                           double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  if (k == 0) return detail::kScalarTable.shot_noise_sum(xs, ys, n, ax, ay, half_alpha);

  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vay = vdupq_n_f64(ay);
  float64x2_t acc_lo = vdupq_n_f64(0.0);
  float64x2_t acc_hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc_lo = vaddq_f64(acc_lo, inverse_power_int(sq_distance(xs + i, ys + i, vax, vay), k));
    acc_hi = vaddq_f64(acc_hi, inverse_power_int(sq_distance(xs + i + 2, ys + i + 2, vax, vay), k));
  }
  double acc = horizontal_sum(acc_lo, acc_hi);
  for (; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    acc += detail::inverse_power_int(dx * dx + dy * dy, k);
  }
  return acc;
}

double min_sq_distance_neon(const double* xs, const double* ys, std::size_t n, double ax, double ay) {
  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vay = vdupq_n_f64(ay);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) best = vminq_f64(best, sq_distance(xs + i, ys + i, vax, vay));
  double result = vminvq_f64(best);
  for (; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    result = std::min(result, dx * dx + dy * dy);
  }
  return result;
}

}  // namespace

namespace detail {
const KernelTable kNeonTable{KernelBackend::Neon, &sum_inverse_power_neon, &shot_noise_sum_neon,
                             &min_sq_distance_neon};
}  // namespace detail

}  // namespace cogharvest::simd

#endif

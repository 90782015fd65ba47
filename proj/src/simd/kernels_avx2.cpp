#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "cogharvest/simd/kernels.hpp"
#include "power_term.hpp"

// No "fma" in the target list: the compiler must not contract mul+add, so
// every lane reproduces the scalar element value bit for bit.
#define COGHARVEST_TARGET_AVX2 __attribute__((target("avx2")))

namespace cogharvest::simd {

namespace {

COGHARVEST_TARGET_AVX2 inline __m256d inverse_power_int(__m256d d2, int k) {
  __m256d p = d2;
  for (int i = 1; i < k; ++i) p = _mm256_mul_pd(p, d2);
  return _mm256_div_pd(_mm256_set1_pd(1.0), p);
}

COGHARVEST_TARGET_AVX2 inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

COGHARVEST_TARGET_AVX2 inline __m256d sq_distance(const double* xs, const double* ys, __m256d ax,
                                                  __m256d ay) {
  const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs), ax);
  const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys), ay);
  return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

COGHARVEST_TARGET_AVX2 double sum_inverse_power_avx2(const double* d2, std::size_t n, double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  if (k == 0) return detail::kScalarTable.sum_inverse_power(d2, n, half_alpha);

  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, inverse_power_int(_mm256_loadu_pd(d2 + i), k));
    acc1 = _mm256_add_pd(acc1, inverse_power_int(_mm256_loadu_pd(d2 + i + 4), k));
  }
  if (i + 4 <= n) {
    acc0 = _mm256_add_pd(acc0, inverse_power_int(_mm256_loadu_pd(d2 + i), k));
    i += 4;
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += detail::inverse_power_int(d2[i], k);
  return acc;
}

COGHARVEST_TARGET_AVX2 double shot_noise_sum_avx2(const double* xs, const double* ys, std::size_t n,
                                                  double ax, double ay, double half_alpha) {
  const int k = integer_half_alpha(half_alpha);
  if (k == 0) return detail::kScalarTable.shot_noise_sum(xs, ys, n, ax, ay, half_alpha);

  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, inverse_power_int(sq_distance(xs + i, ys + i, vax, vay), k));
    acc1 = _mm256_add_pd(acc1, inverse_power_int(sq_distance(xs + i + 4, ys + i + 4, vax, vay), k));
  }
  if (i + 4 <= n) {
    acc0 = _mm256_add_pd(acc0, inverse_power_int(sq_distance(xs + i, ys + i, vax, vay), k));
    i += 4;
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    acc += detail::inverse_power_int(dx * dx + dy * dy, k);
  }
  return acc;
}

COGHARVEST_TARGET_AVX2 double min_sq_distance_avx2(const double* xs, const double* ys, std::size_t n,
                                                   double ax, double ay) {
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best = _mm256_min_pd(best, sq_distance(xs + i, ys + i, vax, vay));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double dx = xs[i] - ax;
    const double dy = ys[i] - ay;
    result = std::min(result, dx * dx + dy * dy);
  }
  return result;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{KernelBackend::Avx2, &sum_inverse_power_avx2, &shot_noise_sum_avx2,
                             &min_sq_distance_avx2};
}  // namespace detail

}  // namespace cogharvest::simd

#endif

#pragma once

// Data-parallel inner loops of the Monte Carlo estimators.
//
// Each kernel has a scalar reference implementation and optional AVX2 / NEON
// variants. The variant is selected once at runtime from the CPU features and
// can be forced with the COGHARVEST_KERNELS environment variable
// (scalar | avx2 | neon) or set_active_backend().
//
// Per-element arithmetic is identical across variants: the power-law term is
// d2^-k by repeated multiplication when k = alpha/2 is a small integer and
// std::pow otherwise (pow has no vector form, so non-integer k always takes
// the scalar loop). Sums differ across variants only by summation order.
// min_sq_distance is exact in every variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace cogharvest::simd {

enum class KernelBackend { Scalar, Avx2, Neon };

std::string_view backend_name(KernelBackend backend);

struct KernelTable {
  KernelBackend backend;
  /// sum_i d2[i]^(-half_alpha)
  double (*sum_inverse_power)(const double* d2, std::size_t n, double half_alpha);
  /// sum_i ((x_i - ax)^2 + (y_i - ay)^2)^(-half_alpha)
  double (*shot_noise_sum)(const double* xs, const double* ys, std::size_t n, double ax, double ay,
                           double half_alpha);
  /// min_i (x_i - ax)^2 + (y_i - ay)^2, +inf when n == 0
  double (*min_sq_distance)(const double* xs, const double* ys, std::size_t n, double ax, double ay);
};

/// Largest integer exponent handled by repeated multiplication.
inline constexpr int kMaxIntegerHalfAlpha = 8;

/// half_alpha as an integer in [1, kMaxIntegerHalfAlpha], or 0 if it is not one.
int integer_half_alpha(double half_alpha);

/// nullptr when the backend is not compiled in or the CPU lacks it.
const KernelTable* kernel_table(KernelBackend backend);

const KernelTable& active_kernels();

/// Throws InvalidArgument when the backend is unavailable.
void set_active_backend(KernelBackend backend);

KernelBackend best_available_backend();

// Span front ends over the active table.

inline double sum_inverse_power(std::span<const double> d2, double half_alpha) {
  return active_kernels().sum_inverse_power(d2.data(), d2.size(), half_alpha);
}

inline double shot_noise_sum(std::span<const double> xs, std::span<const double> ys, double ax,
                             double ay, double half_alpha) {
  return active_kernels().shot_noise_sum(xs.data(), ys.data(), xs.size(), ax, ay, half_alpha);
}

inline double min_sq_distance(std::span<const double> xs, std::span<const double> ys, double ax,
                              double ay) {
  return active_kernels().min_sq_distance(xs.data(), ys.data(), xs.size(), ax, ay);
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace cogharvest::simd

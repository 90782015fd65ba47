#include <atomic>
#include <cstdlib>
#include <string>

#include "cogharvest/error.hpp"
#include "cogharvest/simd/kernels.hpp"

namespace cogharvest::simd {

namespace {

bool cpu_has(KernelBackend backend) {
  switch (backend) {
    case KernelBackend::Scalar:
      return true;
    case KernelBackend::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case KernelBackend::Neon:
#if defined(__aarch64__)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("COGHARVEST_KERNELS")) {
    const std::string name(forced);
    for (auto b : {KernelBackend::Scalar, KernelBackend::Avx2, KernelBackend::Neon}) {
      if (name == backend_name(b)) {
        if (const auto* t = kernel_table(b)) return t;
      }
    }
  }
  return kernel_table(best_available_backend());
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view backend_name(KernelBackend backend) {
  switch (backend) {
    case KernelBackend::Scalar:
      return "scalar";
    case KernelBackend::Avx2:
      return "avx2";
    case KernelBackend::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* kernel_table(KernelBackend backend) {
  if (!cpu_has(backend)) return nullptr;
  switch (backend) {
    case KernelBackend::Scalar:
      return &detail::kScalarTable;
    case KernelBackend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return &detail::kAvx2Table;
#else
      return nullptr;
#endif
    case KernelBackend::Neon:
#if defined(__aarch64__)
      return &detail::kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

KernelBackend best_available_backend() {
  for (auto b : {KernelBackend::Avx2, KernelBackend::Neon}) {
    if (kernel_table(b) != nullptr) return b;
  }
  return KernelBackend::Scalar;
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void set_active_backend(KernelBackend backend) {
  const auto* table = kernel_table(backend);
  if (table == nullptr) {
    throw InvalidArgument("kernel backend '" + std::string(backend_name(backend)) + "' is not available");
  }
  active_slot().store(table, std::memory_order_release);
}

}  // namespace cogharvest::simd

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cogharvest {

/// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over contiguous index ranges covering [0, count).
/// Bodies must write only to per-index slots or return partial results that
/// the caller combines commutatively; then the outcome does not depend on the
/// worker count. The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::uint64_t count, unsigned workers, Body&& body) {
  const std::uint64_t n_workers = std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1));
  if (n_workers <= 1) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::uint64_t w = 0; w < n_workers; ++w) {
      const std::uint64_t begin = count * w / n_workers;
      const std::uint64_t end = count * (w + 1) / n_workers;
      pool.emplace_back([&, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Parallel sum of per-index integer counts.
template <class Count>
std::uint64_t parallel_count(std::uint64_t count, unsigned workers, Count&& per_index) {
  std::atomic<std::uint64_t> total{0};
  parallel_for(count, workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t local = 0;
    for (std::uint64_t i = begin; i < end; ++i) local += per_index(i);
    total.fetch_add(local, std::memory_order_relaxed);
  });
  return total.load();
}

}  // namespace cogharvest

#pragma once

#include <cmath>
#include <cstdint>

namespace cogharvest {

/// Monte Carlo probability of an outage-type event with a 95% normal-approximation
/// confidence half-width.
struct OutageEstimate {
  double probability = 0.0;
  std::uint64_t trials = 0;
  double ci_halfwidth = 0.0;

  static OutageEstimate from_counts(std::uint64_t failures, std::uint64_t trials) {
    OutageEstimate e;
    e.trials = trials;
    if (trials == 0) return e;
    e.probability = static_cast<double>(failures) / static_cast<double>(trials);
    e.ci_halfwidth = 1.96 * std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(trials));
    return e;
  }

  /// One binomial standard deviation (ci_halfwidth / 1.96).
  double sigma() const { return ci_halfwidth / 1.96; }

  friend bool operator==(const OutageEstimate&, const OutageEstimate&) = default;
};

}  // namespace cogharvest

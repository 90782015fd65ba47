#pragma once

// Slot-level Monte Carlo of the two-tier network. The transmitting-ST process
// is simulated as it is (charged STs outside every guard zone), not replaced
// by a Poisson process.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cogharvest/analytic.hpp"
#include "cogharvest/estimate.hpp"
#include "cogharvest/geometry.hpp"
#include "cogharvest/rng.hpp"

namespace cogharvest {

/// Battery level: 0 or P_s.
struct BatteryState {
  bool charged = false;
};

/// Per-slot record of the typical ST at the origin.
struct SlotOutcome {
  bool typical_in_guard = false;
  bool typical_in_harvest = false;
  bool typical_transmits = false;
  std::optional<double> sir_p;
  std::optional<double> sir_s;
};

/// Slots discarded before measuring the chain.
inline constexpr std::uint64_t kWarmupSlots = 1000;

/// Long-run transmit frequency of a battery chain over `slots` measured
/// slots (after kWarmupSlots of warm-up).
struct ChainResult {
  double empirical_p_t = 0.0;
  double occupancy_empty = 0.0;    ///< fraction of measured slots starting at level 0
  double occupancy_charged = 0.0;  ///< ... at level P_s
  std::uint64_t slots = 0;
  std::uint64_t transmissions = 0;

  /// Binomial standard deviation of empirical_p_t.
  double sigma() const;
};

/// Abstract two-state chain: 0 -> 1 w.p. p_h; from 1 transmit and return to
/// 0 w.p. 1 - p_g, otherwise stay. One uniform per slot from substream 0.
ChainResult simulate_battery_chain(double p_g, double p_h, std::uint64_t slots, RngStream rng);

/// Applies one slot of the battery rule to `battery` given where the typical
/// ST is; returns whether it transmits.
bool step_battery(BatteryState& battery, bool in_guard, bool in_harvest);

/// Positional version: every slot draws a fresh PT process (substream = slot
/// index) and the typical ST at the origin charges inside any harvesting
/// zone and transmits when charged and outside every guard zone. Only PTs
/// within r_g of the origin can affect either test, so each slot samples the
/// PT process on the disk of radius r_g (an exact restriction).
ChainResult empirical_tx_prob(const NetworkConfig& cfg, std::uint64_t slots, RngStream rng, unsigned workers = 0);

/// empirical_tx_prob with the per-slot record kept.
std::vector<SlotOutcome> trace_typical_slots(const NetworkConfig& cfg, std::uint64_t slots, RngStream rng);

/// STs that are charged and lie outside every disk of radius r_g around a
/// point of `primaries` or around `extra_guard_center`.
PointSample transmitting_secondaries(const PointSample& primaries, const PointSample& secondaries,
                                     std::span<const std::uint8_t> charged, double r_g,
                                     std::optional<Point2D> extra_guard_center = std::nullopt);

/// Serving transmitter of the typical receiver at the origin.
inline constexpr Point2D kServingTransmitter{1.0, 0.0};

/// One realization seen by the typical receiver at the origin.
struct TrialRealization {
  PointSample primaries;
  PointSample secondaries;
  std::vector<std::uint8_t> charged;
  PointSample transmitting;
  double interference_pt = 0.0;  ///< from PTs, unit power
  double interference_st = 0.0;  ///< from transmitting STs, power P_s / P_p
  double sir = 0.0;
};

/// Primary receiver: PT X* at (1, 0) is the Palm point of the PT process and
/// casts a guard zone, but its own signal is not interference.
TrialRealization sample_primary_trial(const NetworkConfig& cfg, StreamEngine& engine,
                                      double window_radius = kDefaultWindowRadius);

enum class GuardCondition {
  Clear,     ///< no PT within r_g of the serving ST (the typical ST may transmit)
  Violated,  ///< at least one PT within r_g of the serving ST
};

/// Secondary receiver: ST Y* at (1, 0); the PT process is sampled on the
/// window minus b(Y*, r_g) (Clear) or with at least one PT forced inside it
/// (Violated).
TrialRealization sample_secondary_trial(const NetworkConfig& cfg, StreamEngine& engine,
                                        double window_radius = kDefaultWindowRadius,
                                        GuardCondition condition = GuardCondition::Clear);

OutageEstimate estimate_primary_outage(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                       const SamplingOptions& opts = {});

OutageEstimate estimate_secondary_outage(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                         const SamplingOptions& opts = {},
                                         GuardCondition condition = GuardCondition::Clear);

/// SIR per trial (trial i on substream i). Target SIRs enter only through the
/// final comparison, so one set of realizations serves a whole theta sweep.
std::vector<double> primary_sir_samples(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                        const SamplingOptions& opts = {});
std::vector<double> secondary_sir_samples(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                          const SamplingOptions& opts = {},
                                          GuardCondition condition = GuardCondition::Clear);

/// Fraction of samples with SIR < theta.
OutageEstimate outage_from_sir(std::span<const double> sir, double theta);

}  // namespace cogharvest

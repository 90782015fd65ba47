#include "cogharvest/simulator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cogharvest/error.hpp"
#include "cogharvest/parallel.hpp"
#include "cogharvest/simd/kernels.hpp"

namespace cogharvest {

namespace {

constexpr Point2D kOrigin{0.0, 0.0};

void check_count(std::uint64_t n, const char* what) {
  if (n == 0) throw InvalidArgument(std::string(what) + " must be >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument(std::string(what) + " exceed the substream range");
}

PointSample sample_or_empty(double density, const Window& window, StreamEngine& engine) {
  if (density == 0.0) return PointSample(0.0, window);
  return sample_hppp(density, window, engine);
}

std::vector<std::uint8_t> mark_charged(std::size_t n, double pi_1, StreamEngine& engine) {
  std::vector<std::uint8_t> charged(n);
  for (auto& c : charged) c = engine.bernoulli(pi_1) ? 1 : 0;
  return charged;
}

// Zero-truncated Poisson count.
std::uint64_t poisson_at_least_one(double mean, StreamEngine& engine) {
  if (mean >= 1.0) {
    for (;;) {
      if (const auto k = engine.poisson(mean); k >= 1) return k;
    }
  }
  const double u = engine.uniform() * -std::expm1(-mean);
  double term = std::exp(-mean) * mean;  // Pr(N = 1)
  double cumulative = term;
  std::uint64_t k = 1;
  while (cumulative < u) {
    ++k;
    term *= mean / static_cast<double>(k);
    cumulative += term;
    if (term == 0.0) break;
  }
  return k;
}

void finish_trial(TrialRealization& t, const NetworkConfig& cfg, double signal) {
  t.interference_pt = shot_noise(kOrigin, t.primaries, cfg.alpha, 1.0);
  t.interference_st = shot_noise(kOrigin, t.transmitting, cfg.alpha, cfg.power_ratio);
  const double total = t.interference_pt + t.interference_st;
  t.sir = total > 0.0 ? signal / total : std::numeric_limits<double>::infinity();
}

}  // namespace

double ChainResult::sigma() const {
  if (slots == 0) return 0.0;
  return std::sqrt(empirical_p_t * (1.0 - empirical_p_t) / static_cast<double>(slots));
}

bool step_battery(BatteryState& battery, bool in_guard, bool in_harvest) {
  if (battery.charged) {
    if (in_guard) return false;
    battery.charged = false;
    return true;
  }
  if (in_harvest) battery.charged = true;
  return false;
}

ChainResult simulate_battery_chain(double p_g, double p_h, std::uint64_t slots, RngStream rng) {
  if (!(p_g >= 0.0 && p_g <= 1.0) || !(p_h >= 0.0 && p_h <= 1.0)) {
    throw InvalidArgument("chain probabilities must lie in [0, 1]");
  }
  if (slots == 0) throw InvalidArgument("slots must be >= 1");

  StreamEngine engine(rng, 0);
  bool charged = false;
  ChainResult r;
  r.slots = slots;
  std::uint64_t charged_slots = 0;
  for (std::uint64_t t = 0; t < kWarmupSlots + slots; ++t) {
    const bool measured = t >= kWarmupSlots;
    const double u = engine.uniform();
    if (measured && charged) ++charged_slots;
    if (charged) {
      if (u < 1.0 - p_g) {
        charged = false;
        if (measured) ++r.transmissions;
      }
    } else if (u < p_h) {
      charged = true;
    }
  }
  r.empirical_p_t = static_cast<double>(r.transmissions) / static_cast<double>(slots);
  r.occupancy_charged = static_cast<double>(charged_slots) / static_cast<double>(slots);
  r.occupancy_empty = 1.0 - r.occupancy_charged;
  return r;
}

namespace {

// Bit 0: in some harvesting zone. Bit 1: in some guard zone.
std::vector<std::uint8_t> typical_slot_geometry(const NetworkConfig& cfg, std::uint64_t total, RngStream rng,
                                                unsigned workers) {
  std::vector<std::uint8_t> flags(total, 0);
  if (cfg.lambda_p == 0.0) return flags;
  const Window window(cfg.r_g);
  parallel_for(total, workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      StreamEngine engine(rng, static_cast<std::uint32_t>(t));
      const PointSample pts = sample_hppp(cfg.lambda_p, window, engine);
      if (pts.empty()) continue;
      const double d2 = simd::min_sq_distance(pts.xs(), pts.ys(), 0.0, 0.0);
      flags[t] = static_cast<std::uint8_t>((d2 <= cfg.r_h * cfg.r_h ? 1 : 0) | (d2 <= cfg.r_g * cfg.r_g ? 2 : 0));
    }
  });
  return flags;
}

}  // namespace

ChainResult empirical_tx_prob(const NetworkConfig& cfg, std::uint64_t slots, RngStream rng, unsigned workers) {
  validate(cfg);
  if (slots < kWarmupSlots) throw InvalidArgument("slots must be at least the warm-up length");
  check_count(kWarmupSlots + slots, "slots");

  const auto flags = typical_slot_geometry(cfg, kWarmupSlots + slots, rng, workers);
  BatteryState battery;
  ChainResult r;
  r.slots = slots;
  std::uint64_t charged_slots = 0;
  for (std::uint64_t t = 0; t < flags.size(); ++t) {
    const bool measured = t >= kWarmupSlots;
    if (measured && battery.charged) ++charged_slots;
    const bool tx = step_battery(battery, (flags[t] & 2) != 0, (flags[t] & 1) != 0);
    if (measured && tx) ++r.transmissions;
  }
  r.empirical_p_t = static_cast<double>(r.transmissions) / static_cast<double>(slots);
  r.occupancy_charged = static_cast<double>(charged_slots) / static_cast<double>(slots);
  r.occupancy_empty = 1.0 - r.occupancy_charged;
  return r;
}

std::vector<SlotOutcome> trace_typical_slots(const NetworkConfig& cfg, std::uint64_t slots, RngStream rng) {
  validate(cfg);
  check_count(slots, "slots");
  const auto flags = typical_slot_geometry(cfg, slots, rng, 1);
  std::vector<SlotOutcome> out(slots);
  BatteryState battery;
  for (std::uint64_t t = 0; t < slots; ++t) {
    out[t].typical_in_harvest = (flags[t] & 1) != 0;
    out[t].typical_in_guard = (flags[t] & 2) != 0;
    out[t].typical_transmits = step_battery(battery, out[t].typical_in_guard, out[t].typical_in_harvest);
  }
  return out;
}

PointSample transmitting_secondaries(const PointSample& primaries, const PointSample& secondaries,
                                     std::span<const std::uint8_t> charged, double r_g,
                                     std::optional<Point2D> extra_guard_center) {
  if (charged.size() != secondaries.size()) throw InvalidArgument("one charge mark per secondary required");
  const double r2 = r_g * r_g;
  PointSample out(secondaries.density(), secondaries.window());
  for (std::size_t i = 0; i < secondaries.size(); ++i) {
    if (!charged[i]) continue;
    const Point2D p = secondaries.point(i);
    if (extra_guard_center) {
      const double dx = p.x - extra_guard_center->x;
      const double dy = p.y - extra_guard_center->y;
      if (dx * dx + dy * dy <= r2) continue;
    }
    if (!primaries.empty() && simd::min_sq_distance(primaries.xs(), primaries.ys(), p.x, p.y) <= r2) continue;
    out.push_back(p);
  }
  return out;
}

TrialRealization sample_primary_trial(const NetworkConfig& cfg, StreamEngine& engine, double window_radius) {
  const double pi_1 = tx_prob(guard_prob(cfg.lambda_p, cfg.r_g), harvest_prob(cfg.lambda_p, cfg.r_h)).pi_1;
  const Window window(window_radius);
  TrialRealization t{sample_or_empty(cfg.lambda_p, window, engine), sample_or_empty(cfg.lambda_s, window, engine),
                     {}, PointSample(cfg.lambda_s, window)};
  resample_coincident(t.primaries, kOrigin, engine);
  resample_coincident(t.secondaries, kOrigin, engine);
  t.charged = mark_charged(t.secondaries.size(), pi_1, engine);
  t.transmitting = transmitting_secondaries(t.primaries, t.secondaries, t.charged, cfg.r_g, kServingTransmitter);
  finish_trial(t, cfg, 1.0);
  return t;
}

TrialRealization sample_secondary_trial(const NetworkConfig& cfg, StreamEngine& engine, double window_radius,
                                        GuardCondition condition) {
  const double pi_1 = tx_prob(guard_prob(cfg.lambda_p, cfg.r_g), harvest_prob(cfg.lambda_p, cfg.r_h)).pi_1;
  const Disk guard{kServingTransmitter, cfg.r_g};
  const Window full(window_radius);
  const Window outside_guard(window_radius, guard);

  PointSample primaries = sample_or_empty(cfg.lambda_p, outside_guard, engine);
  if (condition == GuardCondition::Violated) {
    if (cfg.lambda_p == 0.0) throw InvalidArgument("guard violation needs lambda_p > 0");
    // PTs inside b(Y*, r_g), conditioned on there being at least one.
    PointSample merged(cfg.lambda_p, full, {primaries.xs().begin(), primaries.xs().end()},
                       {primaries.ys().begin(), primaries.ys().end()});
    const std::uint64_t n = poisson_at_least_one(cfg.lambda_p * std::numbers::pi * cfg.r_g * cfg.r_g, engine);
    for (std::uint64_t i = 0; i < n;) {
      const Point2D q = sample_uniform_in_disk(cfg.r_g, engine);
      const Point2D p{q.x + guard.center.x, q.y + guard.center.y};
      if (!full.admits(p)) continue;
      merged.push_back(p);
      ++i;
    }
    primaries = std::move(merged);
  }

  TrialRealization t{std::move(primaries), sample_or_empty(cfg.lambda_s, full, engine), {},
                     PointSample(cfg.lambda_s, full)};
  resample_coincident(t.primaries, kOrigin, engine);
  resample_coincident(t.secondaries, kOrigin, engine);
  t.charged = mark_charged(t.secondaries.size(), pi_1, engine);
  t.transmitting = transmitting_secondaries(t.primaries, t.secondaries, t.charged, cfg.r_g);
  finish_trial(t, cfg, cfg.power_ratio);
  return t;
}

std::vector<double> primary_sir_samples(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                        const SamplingOptions& opts) {
  require_harvest_regime(cfg);
  check_count(trials, "trials");
  std::vector<double> sir(trials);
  parallel_for(trials, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      StreamEngine engine(rng, static_cast<std::uint32_t>(i));
      sir[i] = sample_primary_trial(cfg, engine, opts.window_radius).sir;
    }
  });
  return sir;
}

std::vector<double> secondary_sir_samples(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                          const SamplingOptions& opts, GuardCondition condition) {
  require_harvest_regime(cfg);
  check_count(trials, "trials");
  std::vector<double> sir(trials);
  parallel_for(trials, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      StreamEngine engine(rng, static_cast<std::uint32_t>(i));
      sir[i] = sample_secondary_trial(cfg, engine, opts.window_radius, condition).sir;
    }
  });
  return sir;
}

OutageEstimate outage_from_sir(std::span<const double> sir, double theta) {
  std::uint64_t failures = 0;
  for (double s : sir) failures += s < theta ? 1 : 0;
  return OutageEstimate::from_counts(failures, sir.size());
}

OutageEstimate estimate_primary_outage(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                       const SamplingOptions& opts) {
  return outage_from_sir(primary_sir_samples(cfg, trials, rng, opts), cfg.theta_p);
}

OutageEstimate estimate_secondary_outage(const NetworkConfig& cfg, std::uint64_t trials, RngStream rng,
                                         const SamplingOptions& opts, GuardCondition condition) {
  return outage_from_sir(secondary_sir_samples(cfg, trials, rng, opts, condition), cfg.theta_s);
}

}  // namespace cogharvest

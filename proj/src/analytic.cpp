#include "cogharvest/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cogharvest/error.hpp"
#include "cogharvest/parallel.hpp"
#include "cogharvest/simd/kernels.hpp"

namespace cogharvest {

namespace {

constexpr double kPi32 = 5.568327996831707845;  // pi^(3/2)

void require(bool ok, const char* invariant) {
  if (!ok) throw InvalidArgument(std::string("invariant violated: ") + invariant);
}

void check_trials(std::uint64_t trials) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  if (trials > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("trials exceed the substream range");
}

double unit_shot_noise_at_center(double density, double half_alpha, double radius, StreamEngine& engine) {
  thread_local std::vector<double> d2;
  sample_hppp_center_sq_distances(density, radius, engine, d2);
  return simd::sum_inverse_power(d2, half_alpha);
}

}  // namespace

double NetworkConfig::power_cap() const { return eta * std::pow(r_h, -alpha); }

void validate(const NetworkConfig& c) {
  for (double v : {c.lambda_p, c.lambda_s, c.power_ratio, c.r_g, c.r_h, c.eta, c.alpha, c.theta_p, c.theta_s,
                   c.eps_p, c.eps_s}) {
    require(std::isfinite(v), "all parameters finite");
  }
  require(c.lambda_p >= 0.0, "lambda_p >= 0");
  require(c.lambda_s >= 0.0, "lambda_s >= 0");
  require(c.power_ratio > 0.0, "p_ratio > 0");
  require(c.r_h > 0.0 && c.r_h < c.r_g, "0 < r_h < r_g");
  require(c.eta > 0.0 && c.eta <= 1.0, "0 < eta <= 1");
  require(c.alpha > 2.0, "alpha > 2");
  require(c.theta_p > 0.0, "theta_p > 0");
  require(c.theta_s > 0.0, "theta_s > 0");
  require(c.eps_p > 0.0 && c.eps_p < 1.0, "0 < eps_p < 1");
  require(c.eps_s > 0.0 && c.eps_s < 1.0, "0 < eps_s < 1");
}

void require_harvest_regime(const NetworkConfig& cfg) {
  validate(cfg);
  require(cfg.power_ratio <= cfg.power_cap(), "p_ratio <= eta * r_h^-alpha (one-slot charging)");
}

double guard_prob(double lambda_p, double r_g) {
  if (!(lambda_p >= 0.0) || !(r_g >= 0.0)) throw InvalidArgument("guard_prob needs lambda_p >= 0 and r_g >= 0");
  return -std::expm1(-std::numbers::pi * lambda_p * r_g * r_g);
}

double harvest_prob(double lambda_p, double r_h) {
  if (!(lambda_p >= 0.0) || !(r_h >= 0.0)) throw InvalidArgument("harvest_prob needs lambda_p >= 0 and r_h >= 0");
  return -std::expm1(-std::numbers::pi * lambda_p * r_h * r_h);
}

TxProbability tx_prob(double p_g, double p_h) {
  if (!(p_g >= 0.0 && p_g <= 1.0) || !(p_h >= 0.0 && p_h <= 1.0)) {
    throw InvalidArgument("tx_prob needs p_g, p_h in [0, 1]");
  }
  // pi P = pi for P = [[1 - p_h, p_h], [1 - p_g, p_g]].
  const double denom = p_h + 1.0 - p_g;
  if (denom == 0.0) throw DegenerateChainError("battery chain has no unique steady state (p_h = 0, p_g = 1)");
  TxProbability t;
  t.pi_0 = (1.0 - p_g) / denom;
  t.pi_1 = p_h / denom;
  t.p_t = p_h * (1.0 - p_g) / denom;
  return t;
}

double tau_primary(const NetworkConfig& cfg, double p_t) {
  validate(cfg);
  const double e = 2.0 / cfg.alpha;
  return std::pow(cfg.theta_p, e) * (p_t * cfg.lambda_s * std::pow(cfg.power_ratio, e) + cfg.lambda_p);
}

double tau_secondary(const NetworkConfig& cfg, double p_t) {
  validate(cfg);
  const double e = 2.0 / cfg.alpha;
  return std::pow(cfg.theta_s, e) * (p_t * cfg.lambda_s + cfg.lambda_p * std::pow(cfg.power_ratio, -e));
}

DerivedProbabilities derive_probabilities(const NetworkConfig& cfg) {
  validate(cfg);
  DerivedProbabilities d;
  d.p_g = guard_prob(cfg.lambda_p, cfg.r_g);
  d.p_h = harvest_prob(cfg.lambda_p, cfg.r_h);
  const TxProbability t = tx_prob(d.p_g, d.p_h);
  d.p_t = t.p_t;
  d.pi_0 = t.pi_0;
  d.pi_1 = t.pi_1;
  d.tau_p = tau_primary(cfg, d.p_t);
  d.tau_s = tau_secondary(cfg, d.p_t);
  return d;
}

OutageEstimate ccdf_unit_shotnoise(double density, double alpha, std::uint64_t trials, RngStream rng,
                                   const SamplingOptions& opts) {
  if (!(density >= 0.0) || !std::isfinite(density)) throw InvalidArgument("density must be finite and >= 0");
  if (!(alpha > 2.0)) throw InvalidArgument("alpha must exceed 2");
  check_trials(trials);
  if (density == 0.0) return OutageEstimate::from_counts(0, trials);

  const double half_alpha = 0.5 * alpha;
  const std::uint64_t exceed = parallel_count(trials, opts.workers, [&](std::uint64_t i) -> std::uint64_t {
    StreamEngine engine(rng, static_cast<std::uint32_t>(i));
    return unit_shot_noise_at_center(density, half_alpha, opts.window_radius, engine) > 1.0 ? 1 : 0;
  });
  return OutageEstimate::from_counts(exceed, trials);
}

double levy_ccdf_alpha4(double density) {
  if (!(density >= 0.0)) throw InvalidArgument("density must be >= 0");
  return std::erf(kPi32 * density / 2.0);
}

double levy_nominal_alpha4(double target) {
  if (!(target > 0.0 && target < 1.0)) throw InvalidArgument("target must lie in (0, 1)");
  // erf is increasing; bisect on z, then refine with Newton.
  double lo = 0.0, hi = 1.0;
  while (std::erf(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid) < target ? lo : hi) = mid;
  }
  double z = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    z -= (std::erf(z) - target) / (2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z));
  }
  return 2.0 * z / kPi32;
}

ShotNoiseReference ShotNoiseReference::sample(double reference_density, double alpha, std::uint64_t trials,
                                              RngStream rng, const SamplingOptions& opts) {
  if (!(reference_density > 0.0) || !std::isfinite(reference_density)) {
    throw InvalidArgument("reference density must be finite and > 0");
  }
  if (!(alpha > 2.0)) throw InvalidArgument("alpha must exceed 2");
  check_trials(trials);

  std::vector<double> values(trials);
  const double half_alpha = 0.5 * alpha;
  parallel_for(trials, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      StreamEngine engine(rng, static_cast<std::uint32_t>(i));
      values[i] = unit_shot_noise_at_center(reference_density, half_alpha, opts.window_radius, engine);
    }
  });
  std::sort(values.begin(), values.end());
  return ShotNoiseReference(reference_density, alpha, std::move(values));
}

OutageEstimate ShotNoiseReference::ccdf(double density) const {
  if (!(density >= 0.0) || density > reference_density_) {
    throw InvalidArgument("density must lie in [0, reference density]");
  }
  if (density == 0.0) return OutageEstimate::from_counts(0, trials());
  const double threshold = std::pow(reference_density_ / density, 0.5 * alpha_);
  const auto above = sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), threshold);
  return OutageEstimate::from_counts(static_cast<std::uint64_t>(above), trials());
}

NominalDensitySolver::NominalDensitySolver(double alpha, NominalSolverSettings settings)
    : alpha_(alpha), settings_(settings) {
  if (!(alpha > 2.0)) throw InvalidArgument("alpha must exceed 2");
  if (!(settings_.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be > 0");
  if (!(settings_.initial_upper > 0.0)) throw InvalidArgument("initial bracket must be > 0");
  check_trials(settings_.trials);
}

OutageEstimate NominalDensitySolver::ccdf(double density) const {
  if (!reference_) throw InvalidArgument("no reference sample yet; call solve() first");
  return reference_->ccdf(density);
}

double NominalDensitySolver::solve(double target) {
  if (!(target > 0.0 && target < 1.0)) throw InvalidArgument("nominal-density target must lie in (0, 1)");

  double upper = reference_ ? reference_->reference_density() : settings_.initial_upper;
  for (int widenings = 0;; ++widenings) {
    if (!reference_ || reference_->reference_density() != upper) {
      reference_ = ShotNoiseReference::sample(upper, alpha_, settings_.trials, settings_.rng, settings_.sampling);
    }
    if (reference_->ccdf(upper).probability >= target) break;
    if (widenings == settings_.max_widenings) {
      throw SolverError("could not bracket CCDF target " + std::to_string(target) + " below density " +
                        std::to_string(upper));
    }
    upper *= 2.0;
  }

  double lo = 0.0;
  double hi = upper;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = reference_->ccdf(mid).probability;
    if (std::abs(f - target) <= settings_.tolerance) return mid;
    (f < target ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double nominal_density(double target, double alpha, std::uint64_t trials, double tolerance, RngStream rng,
                       const SamplingOptions& opts) {
  NominalSolverSettings s;
  s.trials = trials;
  s.tolerance = tolerance;
  s.rng = rng;
  s.sampling = opts;
  NominalDensitySolver solver(alpha, s);
  return solver.solve(target);
}

double secondary_nominal_target(double eps_s, double p_g) { return (1.0 - p_g) * eps_s + p_g; }

NominalDensities nominal_densities(const NetworkConfig& cfg, NominalDensitySolver& solver) {
  validate(cfg);
  NominalDensities mu;
  mu.mu_p = solver.solve(cfg.eps_p);
  mu.mu_s = solver.solve(secondary_nominal_target(cfg.eps_s, guard_prob(cfg.lambda_p, cfg.r_g)));
  mu.solver_trials = solver.settings().trials;
  mu.solver_tolerance = solver.settings().tolerance;
  return mu;
}

namespace {

ApproxOutage primary_from_ccdf(const NetworkConfig& cfg, double tau, OutageEstimate ccdf) {
  ApproxOutage a;
  a.tau = tau;
  a.ccdf = ccdf;
  a.probability = ccdf.probability;
  a.ci_halfwidth = ccdf.ci_halfwidth;
  if (cfg.alpha == 4.0) a.levy = levy_ccdf_alpha4(tau);
  return a;
}

ApproxOutage secondary_from_ccdf(const NetworkConfig& cfg, double tau, OutageEstimate ccdf) {
  const double p_g = guard_prob(cfg.lambda_p, cfg.r_g);
  ApproxOutage a;
  a.tau = tau;
  a.ccdf = ccdf;
  const double raw = (ccdf.probability - p_g) / (1.0 - p_g);
  a.clamped = raw < 0.0;
  a.probability = std::clamp(raw, 0.0, 1.0);
  a.ci_halfwidth = ccdf.ci_halfwidth / (1.0 - p_g);
  if (cfg.alpha == 4.0) a.levy = std::clamp((levy_ccdf_alpha4(tau) - p_g) / (1.0 - p_g), 0.0, 1.0);
  return a;
}

void require_secondary_defined(const NetworkConfig& cfg) {
  if (!(guard_prob(cfg.lambda_p, cfg.r_g) < 1.0)) throw InvalidArgument("secondary outage undefined when p_g = 1");
}

void require_matching_alpha(const NetworkConfig& cfg, const ShotNoiseReference& reference) {
  if (reference.alpha() != cfg.alpha) throw InvalidArgument("reference sample was drawn for another alpha");
}

}  // namespace

ApproxOutage approx_primary_outage(const NetworkConfig& cfg, double p_t, std::uint64_t trials, RngStream rng,
                                   const SamplingOptions& opts) {
  const double tau = tau_primary(cfg, p_t);
  return primary_from_ccdf(cfg, tau, ccdf_unit_shotnoise(tau, cfg.alpha, trials, rng, opts));
}

ApproxOutage approx_secondary_outage(const NetworkConfig& cfg, double p_t, std::uint64_t trials,
                                     RngStream rng, const SamplingOptions& opts) {
  require_secondary_defined(cfg);
  const double tau = tau_secondary(cfg, p_t);
  return secondary_from_ccdf(cfg, tau, ccdf_unit_shotnoise(tau, cfg.alpha, trials, rng, opts));
}

ApproxOutage approx_primary_outage(const NetworkConfig& cfg, double p_t, const ShotNoiseReference& reference) {
  require_matching_alpha(cfg, reference);
  const double tau = tau_primary(cfg, p_t);
  return primary_from_ccdf(cfg, tau, reference.ccdf(tau));
}

ApproxOutage approx_secondary_outage(const NetworkConfig& cfg, double p_t, const ShotNoiseReference& reference) {
  require_secondary_defined(cfg);
  require_matching_alpha(cfg, reference);
  const double tau = tau_secondary(cfg, p_t);
  return secondary_from_ccdf(cfg, tau, reference.ccdf(tau));
}

}  // namespace cogharvest

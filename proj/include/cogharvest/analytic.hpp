#pragma once

// Closed forms of the two-tier harvesting model, the Monte Carlo CCDF of
// unit-power Poisson shot noise, and its inversion into nominal densities.

#include <cstdint>
#include <optional>
#include <vector>

#include "cogharvest/estimate.hpp"
#include "cogharvest/geometry.hpp"
#include "cogharvest/rng.hpp"

namespace cogharvest {

/// Model parameters. P_p is the unit of power, so only P_s/P_p appears.
struct NetworkConfig {
  double lambda_p = 0.01;    ///< PT density
  double lambda_s = 0.1;     ///< ST density
  double power_ratio = 0.1;  ///< P_s / P_p
  double r_g = 2.0;          ///< guard-zone radius
  double r_h = 1.0;          ///< harvesting-zone radius
  double eta = 0.1;          ///< harvesting efficiency in (0, 1]
  double alpha = 4.0;        ///< path-loss exponent > 2
  double theta_p = 5.0;      ///< primary target SIR
  double theta_s = 5.0;      ///< secondary target SIR
  double eps_p = 0.2;        ///< primary outage cap
  double eps_s = 0.4;        ///< secondary outage cap

  /// eta * r_h^-alpha; the largest power ratio that still charges an ST
  /// inside a harvesting zone within one slot.
  double power_cap() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Throws InvalidArgument naming the first violated invariant. Densities may
/// be zero (single-tier limits).
void validate(const NetworkConfig& cfg);

/// validate() plus power_ratio <= power_cap().
void require_harvest_regime(const NetworkConfig& cfg);

/// Probability that a typical point lies in some guard zone.
double guard_prob(double lambda_p, double r_g);
double harvest_prob(double lambda_p, double r_h);

/// Steady state of the two-state battery chain and the resulting
/// transmission probability p_t = pi_1 * (1 - p_g).
struct TxProbability {
  double p_t = 0.0;
  double pi_0 = 0.0;
  double pi_1 = 0.0;
};

/// Throws DegenerateChainError when p_h = 0 and p_g = 1.
TxProbability tx_prob(double p_g, double p_h);

/// Effective density of the unit-power process seen by a primary receiver.
double tau_primary(const NetworkConfig& cfg, double p_t);
/// Same for a secondary receiver.
double tau_secondary(const NetworkConfig& cfg, double p_t);

struct DerivedProbabilities {
  double p_g = 0.0;
  double p_h = 0.0;
  double p_t = 0.0;
  double pi_0 = 0.0;
  double pi_1 = 0.0;
  double tau_p = 0.0;
  double tau_s = 0.0;
};

DerivedProbabilities derive_probabilities(const NetworkConfig& cfg);

struct SamplingOptions {
  double window_radius = kDefaultWindowRadius;
  unsigned workers = 0;  ///< 0: one per hardware thread
};

/// Pr(sum over an HPPP of the given density of |T|^-alpha > 1), sampled at
/// the center of the window. Trial i draws from substream i of `rng`.
OutageEstimate ccdf_unit_shotnoise(double density, double alpha, std::uint64_t trials, RngStream rng,
                                   const SamplingOptions& opts = {});

/// Closed form for alpha = 4: the shot noise is Levy-stable with Laplace
/// transform exp(-pi^(3/2) lambda sqrt(s)), so Pr(> 1) = erf(pi^(3/2) lambda / 2).
double levy_ccdf_alpha4(double density);

/// Inverse of levy_ccdf_alpha4 on (0, 1).
double levy_nominal_alpha4(double target);

/// Shot-noise realizations at one reference density, sorted. Scaling an HPPP
/// by a = sqrt(ref / lambda) gives density lambda and multiplies the shot
/// noise by a^-alpha, so
///   Pr(I_lambda > 1) = Pr(I_ref > (ref / lambda)^(alpha/2))
/// for every lambda <= ref (the scaled window only grows). All densities are
/// therefore evaluated on common random numbers and the map is exactly
/// monotone.
class ShotNoiseReference {
public:
  static ShotNoiseReference sample(double reference_density, double alpha, std::uint64_t trials,
                                   RngStream rng, const SamplingOptions& opts = {});

  double reference_density() const noexcept { return reference_density_; }
  double alpha() const noexcept { return alpha_; }
  std::uint64_t trials() const noexcept { return static_cast<std::uint64_t>(sorted_.size()); }

  /// Requires 0 <= density <= reference_density().
  OutageEstimate ccdf(double density) const;

private:
  ShotNoiseReference(double ref, double alpha, std::vector<double> sorted)
      : reference_density_(ref), alpha_(alpha), sorted_(std::move(sorted)) {}

  double reference_density_;
  double alpha_;
  std::vector<double> sorted_;
};

struct NominalSolverSettings {
  std::uint64_t trials = 200000;
  double tolerance = 1e-4;  ///< on the probability scale
  RngStream rng{};
  SamplingOptions sampling{};
  double initial_upper = 0.25;  ///< first reference density
  int max_widenings = 8;        ///< doublings of the bracket before giving up
};

/// Bisection for the density whose unit shot-noise CCDF equals a target.
/// One reference sample serves every target whose root it brackets, so
/// repeated solves (sweeps) share common random numbers.
class NominalDensitySolver {
public:
  NominalDensitySolver(double alpha, NominalSolverSettings settings);

  /// target in (0, 1). Throws SolverError when the bracket cannot be widened
  /// far enough.
  double solve(double target);

  /// CCDF at `density` on the current reference sample.
  OutageEstimate ccdf(double density) const;

  const NominalSolverSettings& settings() const noexcept { return settings_; }
  const std::optional<ShotNoiseReference>& reference() const noexcept { return reference_; }

private:
  double alpha_;
  NominalSolverSettings settings_;
  std::optional<ShotNoiseReference> reference_;
};

double nominal_density(double target, double alpha, std::uint64_t trials, double tolerance, RngStream rng,
                       const SamplingOptions& opts = {});

/// Density caps for both networks.
struct NominalDensities {
  double mu_p = 0.0;
  double mu_s = 0.0;
  std::uint64_t solver_trials = 0;
  double solver_tolerance = 0.0;
};

/// CCDF level at which mu_s is defined: (1 - p_g) eps_s + p_g.
double secondary_nominal_target(double eps_s, double p_g);

NominalDensities nominal_densities(const NetworkConfig& cfg, NominalDensitySolver& solver);

struct ApproxOutage {
  double probability = 0.0;   ///< approximated outage probability
  double ci_halfwidth = 0.0;  ///< 95% half-width carried from the CCDF estimate
  double tau = 0.0;           ///< effective density fed to the CCDF
  OutageEstimate ccdf;        ///< raw CCDF estimate at tau
  std::optional<double> levy; ///< closed-form value when alpha = 4
  bool clamped = false;       ///< raw value was negative and set to 0
};

ApproxOutage approx_primary_outage(const NetworkConfig& cfg, double p_t, std::uint64_t trials, RngStream rng,
                                   const SamplingOptions& opts = {});

/// (CCDF(tau_s) - p_g) / (1 - p_g), clamped to [0, 1].
ApproxOutage approx_secondary_outage(const NetworkConfig& cfg, double p_t, std::uint64_t trials,
                                     RngStream rng, const SamplingOptions& opts = {});

/// Same estimators evaluated on one reference sample (tau must not exceed
/// its reference density); sweeps over the target SIR are then coupled.
ApproxOutage approx_primary_outage(const NetworkConfig& cfg, double p_t, const ShotNoiseReference& reference);
ApproxOutage approx_secondary_outage(const NetworkConfig& cfg, double p_t, const ShotNoiseReference& reference);

}  // namespace cogharvest

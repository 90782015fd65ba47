#pragma once

// Secondary spatial-throughput maximization over (P_s / P_p, lambda_s)
// under both outage caps, in closed form, with a grid-search oracle.
//
// Outage is increasing in tau, so the caps become tau_p <= mu_p and
// tau_s <= mu_s, i.e. lambda_s <= f1(x) and lambda_s <= f2(x) for
// x = P_s / P_p in (0, eta r_h^-alpha]. f1 decreases and f2 increases in x.

#include <cstddef>
#include <vector>

#include "cogharvest/analytic.hpp"

namespace cogharvest {

/// p_t * lambda_s * log2(1 + theta_s), in bit/s/Hz/unit-area.
double throughput(double p_t, double lambda_s, double theta_s);

class AdmissibleRegion {
public:
  AdmissibleRegion(const NetworkConfig& cfg, const NominalDensities& mu, double p_t);

  /// Density cap from the primary constraint.
  double f1(double power_ratio) const;
  /// Density cap from the secondary constraint.
  double f2(double power_ratio) const;

  double power_cap() const noexcept { return power_cap_; }
  /// Power ratio where f1 = f2.
  double intersection_power() const noexcept { return intersection_power_; }
  double intersection_density() const noexcept { return intersection_density_; }

  /// False when mu_p <= theta_p^(2/alpha) lambda_p: no ST density satisfies
  /// the primary cap at any power.
  bool primary_feasible() const noexcept { return primary_feasible_; }

  /// tau_p <= mu_p and tau_s <= mu_s, each within the relative slack.
  bool admits(double power_ratio, double lambda_s, double relative_slack = 0.0) const;

private:
  double e_;  // 2 / alpha
  double p_t_;
  double lambda_p_;
  double theta_p_, theta_s_;
  double mu_p_, mu_s_;
  double power_cap_;
  double intersection_power_;
  double intersection_density_;
  bool primary_feasible_;
};

struct OptimizationResult {
  int case_id = 0;               ///< 1: power cap binds; 2: f1 = f2 intersection
  double p_s_star_ratio = 0.0;   ///< optimal P_s / P_p
  double lambda_s_star = 0.0;
  double c_s_star = 0.0;
  double density_factor = 0.0;   ///< p_t * lambda_s_star before the division by p_t
  double mu_p = 0.0;
  double mu_s = 0.0;
  double p_t = 0.0;
  bool feasible = false;         ///< false: lambda_s_star forced to 0
};

/// Case 1 formulas evaluated regardless of the case condition.
OptimizationResult solve_case1(const NetworkConfig& cfg, const NominalDensities& mu, double p_t);
/// Case 2 formulas evaluated regardless of the case condition.
OptimizationResult solve_case2(const NetworkConfig& cfg, const NominalDensities& mu, double p_t);

/// Case 1 when eta r_h^-alpha < (theta_s / theta_p)(mu_s / mu_p)^(-alpha/2),
/// Case 2 otherwise (ties go to Case 2).
OptimizationResult solve_p1(const NetworkConfig& cfg, const NominalDensities& mu, double p_t);

/// Exhaustive search that uses only the two outage caps: power ratio on a
/// log-spaced grid over [cap * 10^-3, cap], lambda_s on a uniform grid over
/// (0, 2 f2(cap)], keeping the largest admissible lambda_s. Two further
/// passes repeat the search on a linear power grid around the best cell with
/// lambda_s over (0, 2 * best].
OptimizationResult grid_oracle(const NetworkConfig& cfg, const NominalDensities& mu, double p_t,
                               std::size_t grid_resolution);

struct SweepRow {
  double lambda_p = 0.0;
  double p_g = 0.0;
  double p_h = 0.0;
  OptimizationResult result;
};

/// Recomputes p_g, p_h, p_t and mu_s (whose CCDF level depends on p_g) for
/// every lambda_p. mu_p and mu_s come from one solver, so the whole sweep
/// shares common random numbers.
std::vector<SweepRow> throughput_sweep(const NetworkConfig& cfg_template, const std::vector<double>& lambda_p_values,
                                       NominalDensitySolver& solver);

/// Same sweep with mu_p and mu_s held fixed.
std::vector<SweepRow> throughput_sweep_frozen_mu(const NetworkConfig& cfg_template,
                                                 const std::vector<double>& lambda_p_values,
                                                 const NominalDensities& mu);

}  // namespace cogharvest

#pragma once

// Experiment runners behind the command-line tool. Each returns plain data;
// printing and file handling stay in the tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cogharvest/analytic.hpp"
#include "cogharvest/config.hpp"
#include "cogharvest/csv.hpp"
#include "cogharvest/optimizer.hpp"

namespace cogharvest {

/// Stream indices under ExperimentConfig::seed. Distinct indices never share
/// Philox counters, so the experiments are independent of each other.
namespace streams {
inline constexpr std::uint32_t kBatteryChain = 1;
inline constexpr std::uint32_t kPositionalChain = 2;
inline constexpr std::uint32_t kPrimarySir = 3;
inline constexpr std::uint32_t kSecondarySir = 4;
inline constexpr std::uint32_t kApproxReference = 5;
inline constexpr std::uint32_t kNominalSolver = 6;
inline constexpr std::uint32_t kLevyCheck = 7;
inline constexpr std::uint32_t kInversionCheck = 8;
inline constexpr std::uint32_t kRandomConfigs = 9;
}  // namespace streams

/// 20 log-spaced points over [0.1, 100].
std::vector<double> default_theta_grid();

/// Nominal-solver settings drawn from the experiment config.
NominalSolverSettings solver_settings(const ExperimentConfig& cfg, unsigned workers);

/// One row per theta with theta_p = theta_s = theta. Simulated columns share
/// one set of SIR realizations and the approximations share one shot-noise
/// reference, so every column is monotone in theta.
CsvTable cmd_outage_sweep(const ExperimentConfig& cfg, const std::vector<double>& thetas, unsigned workers);

enum class NominalWhich { Primary, Secondary };

struct NominalReport {
  NominalWhich which = NominalWhich::Primary;
  double target = 0.0;         ///< outage level asked for
  double ccdf_level = 0.0;     ///< CCDF level solved for (transformed for the secondary)
  double mu = 0.0;
  double ccdf_at_mu = 0.0;     ///< solver's own CCDF estimate at mu
  std::uint64_t trials = 0;
  double tolerance = 0.0;
  std::optional<double> levy_mu;  ///< closed-form inversion when alpha = 4

  std::string to_string() const;
};

/// target defaults to eps_p or eps_s from the config.
NominalReport cmd_nominal(const ExperimentConfig& cfg, NominalWhich which, std::optional<double> target,
                          unsigned workers);

struct OptimizeReport {
  OptimizationResult result;
  DerivedProbabilities probabilities;

  CsvTable table() const;
  std::string summary() const;
};

OptimizeReport cmd_optimize(const ExperimentConfig& cfg, unsigned workers);

/// Linearly spaced lambda_p values; steps = 1 gives lambda_p_min alone.
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

CsvTable cmd_throughput_sweep(const ExperimentConfig& cfg, double lambda_p_min, double lambda_p_max,
                              std::size_t steps, unsigned workers);

/// Rows laid out like cmd_throughput_sweep.
CsvTable sweep_table(const std::vector<SweepRow>& rows);

}  // namespace cogharvest

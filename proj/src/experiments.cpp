#include "cogharvest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cogharvest/error.hpp"
#include "cogharvest/simulator.hpp"

namespace cogharvest {

namespace {

NetworkConfig with_theta(NetworkConfig net, double theta) {
  net.theta_p = theta;
  net.theta_s = theta;
  return net;
}

}  // namespace

std::vector<double> default_theta_grid() {
  constexpr int kPoints = 20;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::pow(10.0, -1.0 + 3.0 * i / (kPoints - 1));
  grid.back() = 100.0;
  return grid;
}

NominalSolverSettings solver_settings(const ExperimentConfig& cfg, unsigned workers) {
  NominalSolverSettings s;
  s.trials = cfg.mu_trials;
  s.tolerance = cfg.mu_tolerance;
  s.rng = RngStream{cfg.seed, streams::kNominalSolver};
  s.sampling = cfg.sampling(workers);
  return s;
}

CsvTable cmd_outage_sweep(const ExperimentConfig& cfg, const std::vector<double>& thetas, unsigned workers) {
  CsvTable table;
  table.header = {"theta", "pout_p_sim", "pout_p_sim_ci", "pout_p_approx", "pout_s_sim", "pout_s_sim_ci",
                  "pout_s_approx"};
  for (double theta : thetas) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidArgument("theta values must be finite and > 0");
  }
  if (thetas.empty()) return table;

  const NetworkConfig& net = cfg.network;
  require_harvest_regime(net);
  const SamplingOptions opts = cfg.sampling(workers);
  const double p_t = derive_probabilities(net).p_t;

  const std::vector<double> sir_p = primary_sir_samples(net, cfg.trials, {cfg.seed, streams::kPrimarySir}, opts);
  const std::vector<double> sir_s =
      secondary_sir_samples(net, cfg.trials, {cfg.seed, streams::kSecondarySir}, opts);

  double reference_density = 0.0;
  for (double theta : thetas) {
    const NetworkConfig n = with_theta(net, theta);
    reference_density = std::max({reference_density, tau_primary(n, p_t), tau_secondary(n, p_t)});
  }
  const ShotNoiseReference reference = ShotNoiseReference::sample(
      reference_density, net.alpha, cfg.trials, {cfg.seed, streams::kApproxReference}, opts);

  for (double theta : thetas) {
    const NetworkConfig n = with_theta(net, theta);
    const OutageEstimate sim_p = outage_from_sir(sir_p, theta);
    const OutageEstimate sim_s = outage_from_sir(sir_s, theta);
    table.add_row({theta, sim_p.probability, sim_p.ci_halfwidth, approx_primary_outage(n, p_t, reference).probability,
                   sim_s.probability, sim_s.ci_halfwidth, approx_secondary_outage(n, p_t, reference).probability});
  }
  return table;
}

std::string NominalReport::to_string() const {
  std::ostringstream os;
  os << "network = " << (which == NominalWhich::Primary ? "p" : "s") << '\n';
  os << "target = " << format_real(target) << '\n';
  os << "ccdf_level = " << format_real(ccdf_level) << '\n';
  os << "mu = " << format_real(mu) << '\n';
  os << "ccdf_at_mu = " << format_real(ccdf_at_mu) << '\n';
  os << "trials = " << trials << '\n';
  os << "tolerance = " << format_real(tolerance) << '\n';
  if (levy_mu) os << "levy_mu = " << format_real(*levy_mu) << '\n';
  return os.str();
}

NominalReport cmd_nominal(const ExperimentConfig& cfg, NominalWhich which, std::optional<double> target,
                          unsigned workers) {
  const NetworkConfig& net = cfg.network;
  validate(net);
  NominalReport r;
  r.which = which;
  r.target = target.value_or(which == NominalWhich::Primary ? net.eps_p : net.eps_s);
  if (!(r.target > 0.0 && r.target < 1.0)) throw InvalidArgument("nominal target must lie in (0, 1)");
  r.ccdf_level = which == NominalWhich::Primary
                     ? r.target
                     : secondary_nominal_target(r.target, guard_prob(net.lambda_p, net.r_g));

  NominalDensitySolver solver(net.alpha, solver_settings(cfg, workers));
  r.mu = solver.solve(r.ccdf_level);
  r.ccdf_at_mu = solver.ccdf(r.mu).probability;
  r.trials = cfg.mu_trials;
  r.tolerance = cfg.mu_tolerance;
  if (net.alpha == 4.0) r.levy_mu = levy_nominal_alpha4(r.ccdf_level);
  return r;
}

CsvTable OptimizeReport::table() const {
  CsvTable t;
  t.header = {"case", "p_s_star_ratio", "lambda_s_star", "c_s_star", "mu_p", "mu_s", "p_t"};
  t.add_row({static_cast<double>(result.case_id), result.p_s_star_ratio, result.lambda_s_star, result.c_s_star,
             result.mu_p, result.mu_s, result.p_t});
  return t;
}

std::string OptimizeReport::summary() const {
  std::ostringstream os;
  os << "p_g = " << format_real(probabilities.p_g) << '\n';
  os << "p_h = " << format_real(probabilities.p_h) << '\n';
  os << "p_t = " << format_real(result.p_t) << '\n';
  os << "mu_p = " << format_real(result.mu_p) << '\n';
  os << "mu_s = " << format_real(result.mu_s) << '\n';
  os << "case = " << result.case_id << '\n';
  os << "feasible = " << (result.feasible ? "yes" : "no") << '\n';
  os << "p_s_star_ratio = " << format_real(result.p_s_star_ratio) << '\n';
  os << "lambda_s_star = " << format_real(result.lambda_s_star) << '\n';
  os << "c_s_star = " << format_real(result.c_s_star) << '\n';
  return os.str();
}

OptimizeReport cmd_optimize(const ExperimentConfig& cfg, unsigned workers) {
  const NetworkConfig& net = cfg.network;
  require_harvest_regime(net);
  NominalDensitySolver solver(net.alpha, solver_settings(cfg, workers));
  OptimizeReport r;
  r.probabilities = derive_probabilities(net);
  r.result = solve_p1(net, nominal_densities(net, solver), r.probabilities.p_t);
  return r;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("steps must be >= 1");
  if (!(lo <= hi)) throw InvalidArgument("grid bounds must satisfy min <= max");
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  grid.back() = hi;
  return grid;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"lambda_p", "p_t", "mu_p", "mu_s", "case", "p_s_star_ratio", "lambda_s_star", "c_s_star",
              "feasible_flag"};
  for (const SweepRow& row : rows) {
    const OptimizationResult& r = row.result;
    t.add_row({row.lambda_p, r.p_t, r.mu_p, r.mu_s, static_cast<double>(r.case_id), r.p_s_star_ratio,
               r.lambda_s_star, r.c_s_star, r.feasible ? 1.0 : 0.0});
  }
  return t;
}

CsvTable cmd_throughput_sweep(const ExperimentConfig& cfg, double lambda_p_min, double lambda_p_max,
                              std::size_t steps, unsigned workers) {
  if (!(lambda_p_min > 0.0)) throw InvalidArgument("lambda_p_min must be > 0");
  NominalDensitySolver solver(cfg.network.alpha, solver_settings(cfg, workers));
  return sweep_table(throughput_sweep(cfg.network, linear_grid(lambda_p_min, lambda_p_max, steps), solver));
}

}  // namespace cogharvest

#include "cogharvest/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogharvest/error.hpp"

namespace cogharvest {

namespace {

constexpr int kGridLevels = 3;

void check_inputs(const NetworkConfig& cfg, const NominalDensities& mu, double p_t) {
  validate(cfg);
  if (!(p_t > 0.0 && p_t <= 1.0)) throw InvalidArgument("p_t must lie in (0, 1]");
  if (!(mu.mu_p > 0.0) || !(mu.mu_s > 0.0)) throw InvalidArgument("nominal densities must be > 0");
}

// factor / p_t, nudged by a few ulps when that makes fl(result * p_t)
// reproduce `factor` exactly.
double divide_keeping_product(double factor, double p_t) {
  const double q = factor / p_t;
  if (q * p_t == factor) return q;
  double up = q;
  double down = q;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (up * p_t == factor) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (down * p_t == factor) return down;
  }
  return q;
}

OptimizationResult finish(int case_id, double power, double factor, const NetworkConfig& cfg,
                          const NominalDensities& mu, double p_t) {
  OptimizationResult r;
  r.case_id = case_id;
  r.p_s_star_ratio = power;
  r.density_factor = factor;
  r.mu_p = mu.mu_p;
  r.mu_s = mu.mu_s;
  r.p_t = p_t;
  r.feasible = factor > 0.0;
  r.lambda_s_star = r.feasible ? divide_keeping_product(factor, p_t) : 0.0;
  r.c_s_star = throughput(p_t, r.lambda_s_star, cfg.theta_s);
  return r;
}

OptimizationResult infeasible(int case_id, const NetworkConfig& cfg, const NominalDensities& mu, double p_t) {
  OptimizationResult r = finish(case_id, cfg.power_cap(), 0.0, cfg, mu, p_t);
  r.feasible = false;
  return r;
}

}  // namespace

double throughput(double p_t, double lambda_s, double theta_s) {
  if (!(p_t >= 0.0) || !(lambda_s >= 0.0) || !(theta_s >= 0.0)) {
    throw InvalidArgument("throughput inputs must be nonnegative");
  }
  return p_t * lambda_s * std::log2(1.0 + theta_s);
}

AdmissibleRegion::AdmissibleRegion(const NetworkConfig& cfg, const NominalDensities& mu, double p_t)
    : e_(2.0 / cfg.alpha),
      p_t_(p_t),
      lambda_p_(cfg.lambda_p),
      theta_p_(cfg.theta_p),
      theta_s_(cfg.theta_s),
      mu_p_(mu.mu_p),
      mu_s_(mu.mu_s),
      power_cap_(cfg.power_cap()) {
  check_inputs(cfg, mu, p_t);
  primary_feasible_ = mu_p_ > std::pow(theta_p_, e_) * lambda_p_;
  intersection_power_ = theta_s_ / theta_p_ * std::pow(mu_s_ / mu_p_, -cfg.alpha / 2.0);
  intersection_density_ =
      mu_s_ * (mu_p_ - std::pow(theta_p_, e_) * lambda_p_) / (p_t_ * std::pow(theta_s_, e_) * mu_p_);
}

double AdmissibleRegion::f1(double x) const {
  return (std::pow(theta_p_, -e_) * mu_p_ - lambda_p_) * std::pow(x, -e_) / p_t_;
}

double AdmissibleRegion::f2(double x) const {
  return (std::pow(theta_s_, -e_) * mu_s_ - lambda_p_ * std::pow(x, -e_)) / p_t_;
}

bool AdmissibleRegion::admits(double x, double lambda_s, double slack) const {
  if (!(x > 0.0) || x > power_cap_ * (1.0 + slack)) return false;
  const double tau_p = std::pow(theta_p_, e_) * (p_t_ * lambda_s * std::pow(x, e_) + lambda_p_);
  const double tau_s = std::pow(theta_s_, e_) * (p_t_ * lambda_s + lambda_p_ * std::pow(x, -e_));
  return tau_p <= mu_p_ * (1.0 + slack) && tau_s <= mu_s_ * (1.0 + slack);
}

OptimizationResult solve_case1(const NetworkConfig& cfg, const NominalDensities& mu, double p_t) {
  check_inputs(cfg, mu, p_t);
  const double e = 2.0 / cfg.alpha;
  const double factor =
      std::pow(cfg.theta_s, -e) * mu.mu_s - std::pow(cfg.eta, -e) * cfg.r_h * cfg.r_h * cfg.lambda_p;
  return finish(1, cfg.power_cap(), factor, cfg, mu, p_t);
}

OptimizationResult solve_case2(const NetworkConfig& cfg, const NominalDensities& mu, double p_t) {
  check_inputs(cfg, mu, p_t);
  const double e = 2.0 / cfg.alpha;
  const double power = cfg.theta_s / cfg.theta_p * std::pow(mu.mu_s / mu.mu_p, -cfg.alpha / 2.0);
  const double factor = std::pow(cfg.theta_s, -e) * mu.mu_s -
                        std::pow(cfg.theta_s / cfg.theta_p, -e) * (mu.mu_s / mu.mu_p) * cfg.lambda_p;
  return finish(2, power, factor, cfg, mu, p_t);
}

OptimizationResult solve_p1(const NetworkConfig& cfg, const NominalDensities& mu, double p_t) {
  const AdmissibleRegion region(cfg, mu, p_t);
  const int case_id = region.power_cap() < region.intersection_power() ? 1 : 2;
  if (!region.primary_feasible()) return infeasible(case_id, cfg, mu, p_t);
  return case_id == 1 ? solve_case1(cfg, mu, p_t) : solve_case2(cfg, mu, p_t);
}

OptimizationResult grid_oracle(const NetworkConfig& cfg, const NominalDensities& mu, double p_t,
                               std::size_t grid_resolution) {
  if (grid_resolution < 100) throw InvalidArgument("grid resolution must be >= 100 per axis");
  const AdmissibleRegion region(cfg, mu, p_t);
  const double cap = region.power_cap();
  double lambda_top = 2.0 * region.f2(cap);
  if (!region.primary_feasible() || !(lambda_top > 0.0)) return infeasible(0, cfg, mu, p_t);

  const std::size_t n = grid_resolution;
  std::vector<double> powers(n);
  for (std::size_t i = 0; i < n; ++i) powers[i] = cap * std::pow(10.0, -3.0 * (1.0 - static_cast<double>(i) / (n - 1)));
  powers.back() = cap;

  double best_power = cap;
  double best_lambda = 0.0;
  for (int level = 0; level < kGridLevels; ++level) {
    // Largest admissible grid lambda per power; both caps are monotone in
    // lambda_s, so a binary search over grid indices finds it.
    std::vector<double> column(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t lo = 0;  // lambda_s = 0 is always admissible
      std::size_t hi = n + 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (region.admits(powers[i], lambda_top * static_cast<double>(mid) / static_cast<double>(n)) ? lo : hi) = mid;
      }
      column[i] = lambda_top * static_cast<double>(lo) / static_cast<double>(n);
    }
    const auto top = std::max_element(column.begin(), column.end());
    if (*top > best_lambda) {
      best_lambda = *top;
      best_power = powers[static_cast<std::size_t>(top - column.begin())];
    }
    if (best_lambda == 0.0) {
      lambda_top /= static_cast<double>(n);
      continue;
    }

    // Next level: the powers tied at the best lambda plus one neighbour on
    // each side, and a lambda axis twice the best value found so far.
    std::size_t first = n, last = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (column[i] == *top) {
        first = std::min(first, i);
        last = i;
      }
    }
    const double left = powers[first == 0 ? 0 : first - 1];
    const double right = powers[std::min(last + 1, n - 1)];
    for (std::size_t i = 0; i < n; ++i) powers[i] = left + (right - left) * static_cast<double>(i) / (n - 1);
    powers.back() = right;
    lambda_top = 2.0 * best_lambda;
  }

  OptimizationResult r;
  r.case_id = best_power == cap ? 1 : 2;
  r.p_s_star_ratio = best_power;
  r.lambda_s_star = best_lambda;
  r.density_factor = best_lambda * p_t;
  r.mu_p = mu.mu_p;
  r.mu_s = mu.mu_s;
  r.p_t = p_t;
  r.feasible = best_lambda > 0.0;
  r.c_s_star = throughput(p_t, best_lambda, cfg.theta_s);
  return r;
}

std::vector<SweepRow> throughput_sweep(const NetworkConfig& cfg_template, const std::vector<double>& lambda_p_values,
                                       NominalDensitySolver& solver) {
  std::vector<SweepRow> rows;
  rows.reserve(lambda_p_values.size());
  for (std::size_t i = 0; i < lambda_p_values.size(); ++i) {
    if (!(lambda_p_values[i] > 0.0)) throw InvalidArgument("sweep densities must be > 0");
    if (i > 0 && !(lambda_p_values[i] > lambda_p_values[i - 1])) {
      throw InvalidArgument("sweep densities must be increasing");
    }
    NetworkConfig cfg = cfg_template;
    cfg.lambda_p = lambda_p_values[i];
    const DerivedProbabilities d = derive_probabilities(cfg);
    const NominalDensities mu = nominal_densities(cfg, solver);
    rows.push_back({cfg.lambda_p, d.p_g, d.p_h, solve_p1(cfg, mu, d.p_t)});
  }
  return rows;
}

std::vector<SweepRow> throughput_sweep_frozen_mu(const NetworkConfig& cfg_template,
                                                 const std::vector<double>& lambda_p_values,
                                                 const NominalDensities& mu) {
  std::vector<SweepRow> rows;
  rows.reserve(lambda_p_values.size());
  for (double lp : lambda_p_values) {
    NetworkConfig cfg = cfg_template;
    cfg.lambda_p = lp;
    const DerivedProbabilities d = derive_probabilities(cfg);
    rows.push_back({lp, d.p_g, d.p_h, solve_p1(cfg, mu, d.p_t)});
  }
  return rows;
}

}  // namespace cogharvest

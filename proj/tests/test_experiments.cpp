#include <doctest.h>

#include <cmath>

#include "cogharvest/error.hpp"
#include "cogharvest/experiments.hpp"
#include "cogharvest/validation.hpp"
#include "oracles.hpp"

using namespace cogharvest;

namespace {

ExperimentConfig quick() {
  ExperimentConfig c;
  c.trials = 4000;
  c.slots = 20000;
  c.mu_trials = 20000;
  c.mu_tolerance = 1e-3;
  return c;
}

}  // namespace

TEST_CASE("default theta grid") {
  const auto g = default_theta_grid();
  REQUIRE(g.size() == 20);
  CHECK(g.front() == doctest::Approx(0.1));
  CHECK(g.back() == 100.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(1000.0, 1.0 / 19)));
}

TEST_CASE("linear grid") {
  CHECK(linear_grid(0.002, 0.02, 1) == std::vector<double>{0.002});
  const auto g = linear_grid(0.002, 0.02, 10);
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 0.002);
  CHECK(g.back() == 0.02);
  CHECK(g[1] == doctest::Approx(0.004));
  CHECK_THROWS_AS(linear_grid(0.1, 0.2, 0), InvalidArgument);
}

TEST_CASE("outage sweep columns") {
  const CsvTable t = cmd_outage_sweep(quick(), {1e-3, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}, 1);
  CHECK(t.header == std::vector<std::string>{"theta", "pout_p_sim", "pout_p_sim_ci", "pout_p_approx",
                                             "pout_s_sim", "pout_s_sim_ci", "pout_s_approx"});
  REQUIRE(t.rows.size() == 8);
  for (int col : {1, 3, 4, 6}) CHECK(t.rows[0][col] <= 0.01);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    for (int col : {1, 3, 4, 6}) CHECK(t.rows[i][col] >= t.rows[i - 1][col]);
  }
  const auto& five = t.rows[4];
  CHECK(std::abs(five[1] - five[3]) <= 0.05);
  CHECK(std::abs(five[4] - five[6]) <= 0.05);
  CHECK(cmd_outage_sweep(quick(), {}, 1).rows.empty());
  CHECK_THROWS_AS(cmd_outage_sweep(quick(), {-1.0}, 1), InvalidArgument);
}

TEST_CASE("outage sweep is independent of the worker count") {
  CHECK(cmd_outage_sweep(quick(), {2.0, 5.0}, 1).to_string() == cmd_outage_sweep(quick(), {2.0, 5.0}, 3).to_string());
}

TEST_CASE("nominal report") {
  ExperimentConfig c = quick();
  const NominalReport p = cmd_nominal(c, NominalWhich::Primary, 0.2, 1);
  CHECK(p.ccdf_level == 0.2);
  REQUIRE(p.levy_mu.has_value());
  CHECK(*p.levy_mu == doctest::Approx(oracle::levy_nominal_alpha4(0.2)).epsilon(1e-10));
  CHECK(std::abs(oracle::levy_ccdf_alpha4(p.mu) - 0.2) <= 1e-3 + 3.0 * 1.96 * std::sqrt(0.16 / 20000));
  CHECK(p.trials == 20000);
  CHECK(p.to_string().find("mu = ") != std::string::npos);

  const NominalReport s = cmd_nominal(c, NominalWhich::Secondary, std::nullopt, 1);
  const double p_g = oracle::disk_hit_prob(0.01, 2.0);
  CHECK(s.target == 0.4);
  CHECK(s.ccdf_level == doctest::Approx((1.0 - p_g) * 0.4 + p_g));

  CHECK(cmd_nominal(c, NominalWhich::Primary, 1e-4, 1).mu < 1e-3);
  c.network.alpha = 3.0;
  CHECK_FALSE(cmd_nominal(c, NominalWhich::Primary, 0.2, 1).levy_mu.has_value());
  CHECK_THROWS_AS(cmd_nominal(c, NominalWhich::Primary, 1.5, 1), InvalidArgument);
}

TEST_CASE("optimize report") {
  const OptimizeReport r = cmd_optimize(quick(), 1);
  const CsvTable t = r.table();
  CHECK(t.header == std::vector<std::string>{"case", "p_s_star_ratio", "lambda_s_star", "c_s_star", "mu_p", "mu_s",
                                             "p_t"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == 1.0);
  CHECK(t.rows[0][1] == doctest::Approx(0.1));
  CHECK(t.rows[0][2] == doctest::Approx(1.3346).epsilon(0.05));
  CHECK(r.summary().find("case = 1") != std::string::npos);
}

TEST_CASE("throughput sweep") {
  const CsvTable t = cmd_throughput_sweep(quick(), 0.002, 0.02, 4, 1);
  CHECK(t.header == std::vector<std::string>{"lambda_p", "p_t", "mu_p", "mu_s", "case", "p_s_star_ratio",
                                             "lambda_s_star", "c_s_star", "feasible_flag"});
  REQUIRE(t.rows.size() == 4);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][0] > t.rows[i - 1][0]);
    CHECK(t.rows[i][7] < t.rows[i - 1][7]);
  }
  // A single step reproduces the optimize row for that density.
  ExperimentConfig c = quick();
  c.network.lambda_p = 0.002;
  const CsvTable one = cmd_throughput_sweep(quick(), 0.002, 0.02, 1, 1);
  const CsvTable opt = cmd_optimize(c, 1).table();
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0][4] == opt.rows[0][0]);
  CHECK(one.rows[0][6] == opt.rows[0][2]);
  CHECK(one.rows[0][7] == opt.rows[0][3]);
}

TEST_CASE("csv formatting") {
  CsvTable t;
  t.header = {"a", "b"};
  t.add_row({0.1, 3.0});
  CHECK(t.to_string() == "a,b\n0.10000000000000001,3\n");
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("validation report on a cheap subset") {
  ValidationOptions opts;
  opts.workers = 1;
  opts.only = {"C5", "C7"};
  const auto checks = run_validation(quick(), opts);
  CHECK(all_passed(checks));
  for (const CheckResult& c : checks) CHECK((c.group == "C5" || c.group == "C7"));
  const std::string report = format_report(checks);
  CHECK(report.find("FAIL") == std::string::npos);
  CHECK(report.find(std::to_string(checks.size()) + "/" + std::to_string(checks.size()) + " checks passed") !=
        std::string::npos);

  opts.tolerance_scale = 1e-6;
  const auto strict = run_validation(quick(), opts);
  CHECK_FALSE(all_passed(strict));
  CHECK(format_report(strict).find("FAIL C5 closed_form_vs_grid_rel_error") != std::string::npos);

  opts.only = {"C9"};
  CHECK_THROWS_AS(run_validation(quick(), opts), InvalidArgument);
}

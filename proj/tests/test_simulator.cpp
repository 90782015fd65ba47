#include <doctest.h>

#include <cmath>

#include "cogharvest/error.hpp"
#include "cogharvest/simulator.hpp"
#include "oracles.hpp"

using namespace cogharvest;

namespace {

SamplingOptions one_worker() { return {kDefaultWindowRadius, 1}; }

double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("battery rule") {
  BatteryState b;
  CHECK_FALSE(step_battery(b, false, false));
  CHECK_FALSE(b.charged);
  CHECK_FALSE(step_battery(b, true, true));
  CHECK(b.charged);
  CHECK_FALSE(step_battery(b, true, false));
  CHECK(b.charged);
  CHECK(step_battery(b, false, true));
  CHECK_FALSE(b.charged);
}

TEST_CASE("abstract battery chain") {
  CHECK(simulate_battery_chain(0.3, 0.0, 10000, RngStream{1, 0}).empirical_p_t == 0.0);
  const ChainResult alt = simulate_battery_chain(0.0, 1.0, 10000, RngStream{1, 1});
  CHECK(alt.empirical_p_t == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(alt.occupancy_charged == doctest::Approx(0.5).epsilon(1e-3));

  const double p_g = oracle::disk_hit_prob(0.01, 2.0);
  const double p_h = oracle::disk_hit_prob(0.01, 1.0);
  const double p_t = oracle::chain_tx_prob(p_g, p_h);
  const ChainResult r = simulate_battery_chain(p_g, p_h, 1000000, RngStream{1, 2});
  CHECK(r.slots == 1000000);
  CHECK(std::abs(r.empirical_p_t - p_t) <= 3.0 * binomial_sigma(p_t, 1e6));
  CHECK(r.occupancy_empty + r.occupancy_charged == doctest::Approx(1.0));
  CHECK(std::abs(r.occupancy_charged - p_h / (p_h + 1.0 - p_g)) <= 0.005);
  CHECK_THROWS_AS(simulate_battery_chain(0.1, 0.1, 0, RngStream{}), InvalidArgument);
}

TEST_CASE("positional chain") {
  NetworkConfig none;
  none.lambda_p = 0.0;
  CHECK(empirical_tx_prob(none, 20000, RngStream{2, 0}, 1).empirical_p_t == 0.0);

  const NetworkConfig cfg;
  const ChainResult pos = empirical_tx_prob(cfg, 300000, RngStream{2, 1}, 1);
  const double p_t = oracle::chain_tx_prob(oracle::disk_hit_prob(0.01, 2.0), oracle::disk_hit_prob(0.01, 1.0));
  CHECK(std::abs(pos.empirical_p_t - p_t) <= 3.0 * binomial_sigma(p_t, 3e5));

  const ChainResult abs_chain = simulate_battery_chain(guard_prob(0.01, 2.0), harvest_prob(0.01, 1.0), 300000,
                                                       RngStream{2, 2});
  CHECK(std::abs(pos.empirical_p_t - abs_chain.empirical_p_t) <=
        3.0 * std::hypot(pos.sigma(), abs_chain.sigma()));

  NetworkConfig near = cfg;
  near.r_h = 1.999;
  const double p = oracle::disk_hit_prob(0.01, 2.0);
  const double p_h = oracle::disk_hit_prob(0.01, 1.999);
  const double p_t_near = oracle::chain_tx_prob(p, p_h);
  const ChainResult n = empirical_tx_prob(near, 300000, RngStream{2, 3}, 1);
  CHECK(std::abs(n.empirical_p_t - p_t_near) <= 3.0 * binomial_sigma(p_t_near, 3e5));

  CHECK_THROWS_AS(empirical_tx_prob(cfg, 10, RngStream{}), InvalidArgument);
}

TEST_CASE("positional chain is independent of the worker count") {
  const NetworkConfig cfg;
  const ChainResult a = empirical_tx_prob(cfg, 50000, RngStream{3, 0}, 1);
  const ChainResult b = empirical_tx_prob(cfg, 50000, RngStream{3, 0}, 3);
  CHECK(a.transmissions == b.transmissions);
  CHECK(a.occupancy_charged == b.occupancy_charged);
}

TEST_CASE("slot trace never transmits from inside a guard zone") {
  const auto trace = trace_typical_slots(NetworkConfig{}, 20000, RngStream{4, 0});
  int tx = 0;
  for (const SlotOutcome& s : trace) {
    REQUIRE_FALSE((s.typical_transmits && s.typical_in_guard));
    if (s.typical_in_harvest) REQUIRE(s.typical_in_guard);
    tx += s.typical_transmits;
  }
  CHECK(tx > 0);
}

TEST_CASE("transmitting secondaries respect every guard zone") {
  PointSample pts(0.01, Window(10.0));
  pts.push_back({5, 0});
  PointSample sts(0.1, Window(10.0));
  sts.push_back({6, 0});   // within 2 of a PT
  sts.push_back({-5, 0});  // clear, charged
  sts.push_back({-6, 0});  // clear, not charged
  sts.push_back({1, 1});   // within 2 of the extra center (1, 0)
  const std::uint8_t charged[] = {1, 1, 0, 1};
  const PointSample tx = transmitting_secondaries(pts, sts, charged, 2.0, Point2D{1, 0});
  REQUIRE(tx.size() == 1);
  CHECK(tx.point(0) == Point2D{-5, 0});
  CHECK_THROWS_AS(transmitting_secondaries(pts, sts, std::span<const std::uint8_t>(charged, 2), 2.0),
                  InvalidArgument);
}

TEST_CASE("primary trials suppress STs near every PT including the serving one") {
  const NetworkConfig cfg;
  for (std::uint32_t i = 0; i < 300; ++i) {
    StreamEngine e({5, 0}, i);
    const TrialRealization t = sample_primary_trial(cfg, e);
    for (std::size_t j = 0; j < t.transmitting.size(); ++j) {
      const Point2D y = t.transmitting.point(j);
      REQUIRE(distance(y, kServingTransmitter) > cfg.r_g);
      const auto d = nearest_distance(y, t.primaries);
      if (d) REQUIRE(*d > cfg.r_g);
    }
    REQUIRE(t.sir == doctest::Approx(1.0 / (t.interference_pt + t.interference_st)));
  }
}

TEST_CASE("secondary trials condition the PT process around the serving ST") {
  const NetworkConfig cfg;
  for (std::uint32_t i = 0; i < 300; ++i) {
    StreamEngine e({6, 0}, i);
    const TrialRealization clear = sample_secondary_trial(cfg, e);
    const auto d = nearest_distance(kServingTransmitter, clear.primaries);
    if (d) REQUIRE(*d >= cfg.r_g);
    StreamEngine f({6, 1}, i);
    const TrialRealization hit = sample_secondary_trial(cfg, f, kDefaultWindowRadius, GuardCondition::Violated);
    REQUIRE(*nearest_distance(kServingTransmitter, hit.primaries) < cfg.r_g);
    REQUIRE(hit.sir == doctest::Approx(cfg.power_ratio / (hit.interference_pt + hit.interference_st)));
  }
}

TEST_CASE("primary-only outage is exactly the Poisson shot-noise law") {
  NetworkConfig cfg;
  cfg.lambda_s = 0.0;
  const OutageEstimate sim = estimate_primary_outage(cfg, 100000, RngStream{7, 0}, one_worker());
  const double levy = oracle::levy_ccdf_alpha4(std::sqrt(5.0) * 0.01);
  CHECK(std::abs(sim.probability - levy) <= std::max(0.01, 3.0 * sim.ci_halfwidth));
  const OutageEstimate mc = ccdf_unit_shotnoise(std::sqrt(5.0) * 0.01, 4.0, 100000, RngStream{7, 1}, one_worker());
  CHECK(std::abs(sim.probability - mc.probability) <= 3.0 * std::hypot(sim.sigma(), mc.sigma()));
}

TEST_CASE("outage vanishes for tiny targets and without interferers") {
  NetworkConfig cfg;
  cfg.theta_p = 1e-6;
  CHECK(estimate_primary_outage(cfg, 2000, RngStream{8, 0}, one_worker()).probability == 0.0);
  NetworkConfig empty;
  empty.lambda_p = 0.0;
  empty.lambda_s = 1e-12;
  CHECK(estimate_secondary_outage(empty, 2000, RngStream{8, 1}, one_worker()).probability == 0.0);
}

TEST_CASE("outage is nondecreasing in the SIR target and in both densities") {
  const NetworkConfig cfg;
  const auto sir = primary_sir_samples(cfg, 20000, RngStream{9, 0}, one_worker());
  double prev = 0.0;
  for (double theta : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double p = outage_from_sir(sir, theta).probability;
    CHECK(p >= prev);
    prev = p;
  }
  NetworkConfig more_pt = cfg;
  more_pt.lambda_p = 0.03;
  NetworkConfig more_st = cfg;
  more_st.lambda_s = 0.4;
  const double base = estimate_primary_outage(cfg, 20000, RngStream{9, 1}, one_worker()).probability;
  CHECK(estimate_primary_outage(more_pt, 20000, RngStream{9, 1}, one_worker()).probability > base);
  CHECK(estimate_primary_outage(more_st, 20000, RngStream{9, 1}, one_worker()).probability > base);
}

TEST_CASE("one PT inside the serving guard zone almost always causes outage") {
  const NetworkConfig cfg;
  const OutageEstimate e =
      estimate_secondary_outage(cfg, 20000, RngStream{10, 0}, one_worker(), GuardCondition::Violated);
  CHECK(e.probability >= 0.9);
}

TEST_CASE("outage estimates are independent of the worker count") {
  const NetworkConfig cfg;
  CHECK(estimate_primary_outage(cfg, 4000, RngStream{11, 0}, {50.0, 1}) ==
        estimate_primary_outage(cfg, 4000, RngStream{11, 0}, {50.0, 3}));
  CHECK(estimate_secondary_outage(cfg, 4000, RngStream{11, 1}, {50.0, 1}) ==
        estimate_secondary_outage(cfg, 4000, RngStream{11, 1}, {50.0, 3}));
}

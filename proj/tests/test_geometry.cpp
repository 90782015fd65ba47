#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "cogharvest/error.hpp"
#include "cogharvest/geometry.hpp"
#include "oracles.hpp"

using namespace cogharvest;

namespace {

PointSample points(std::initializer_list<Point2D> pts, double density = 1.0) {
  PointSample s(density, Window(10.0));
  for (Point2D p : pts) s.push_back(p);
  return s;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class Draw>
Moments count_moments(int n, Draw&& draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(draw(static_cast<std::uint32_t>(i)));
    s += k;
    s2 += k * k;
  }
  const double m = s / n;
  return {m, (s2 - n * m * m) / (n - 1)};
}

}  // namespace

TEST_CASE("nearest distance examples") {
  CHECK(*nearest_distance({0, 0}, points({{3, 4}})) == doctest::Approx(5.0));
  CHECK(*nearest_distance({0, 0}, points({{1, 0}, {0, 2}})) == doctest::Approx(1.0));
  CHECK_FALSE(nearest_distance({0, 0}, points({})).has_value());
}

TEST_CASE("disk union membership examples") {
  CHECK_FALSE(in_disk_union({0, 0}, points({}), 2.0));
  CHECK(in_disk_union({0, 0}, points({{1, 0}}), 2.0));
  CHECK_FALSE(in_disk_union({0, 0}, points({{3, 0}}), 2.0));
  CHECK(in_disk_union({0, 0}, points({{2, 0}}), 2.0));
}

TEST_CASE("shot noise examples") {
  CHECK(shot_noise({0, 0}, points({}), 4.0, 1.0) == 0.0);
  CHECK(shot_noise({0, 0}, points({{1, 0}}), 4.0, 2.0) == doctest::Approx(2.0));
  CHECK(shot_noise({0, 0}, points({{2, 0}, {0, 2}}), 4.0, 1.0) == doctest::Approx(2.0 * std::pow(2.0, -4.0)));
  CHECK(shot_noise({0, 0}, points({{1, 0}, {2, 0}}), 4.0, 1.0, Point2D{1, 0}) == doctest::Approx(1.0 / 16.0));
  CHECK(shot_noise({1, 1}, points({{1, 1}, {2, 1}}), 3.0, 1.0, Point2D{1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("shot noise rejects a coincident point and resampling removes it") {
  PointSample s = points({{0, 0}, {3, 0}});
  CHECK_THROWS_AS(shot_noise({0, 0}, s, 4.0, 1.0), SingularityError);
  try {
    shot_noise({0, 0}, s, 4.0, 1.0);
  } catch (const SingularityError& e) {
    CHECK(e.index() == 0);
  }
  StreamEngine e({1, 0}, 0);
  CHECK(resample_coincident(s, {0, 0}, e) == 1);
  CHECK(s.window().admits(s.point(0)));
  CHECK(std::isfinite(shot_noise({0, 0}, s, 4.0, 1.0)));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(sample_hppp(0.0, Window(5.0), RngStream{}), InvalidArgument);
  CHECK_THROWS_AS(sample_hppp(-1.0, Window(5.0), RngStream{}), InvalidArgument);
  CHECK_THROWS_AS(sample_hppp(std::nan(""), Window(5.0), RngStream{}), InvalidArgument);
  CHECK_THROWS_AS(Window(0.0), InvalidArgument);
  CHECK_THROWS_AS(shot_noise({0, 0}, points({{1, 0}}), 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(scale_points(points({}), 0.0), InvalidArgument);
  CHECK_THROWS_AS(superpose(PointSample(1.0, Window(1.0)), PointSample(1.0, Window(2.0))), InvalidArgument);
}

TEST_CASE("admissible area") {
  const double pi = std::numbers::pi;
  CHECK(Window(50.0).admissible_area() == doctest::Approx(pi * 2500.0));
  CHECK(Window(50.0, Disk{{0, 0}, 2.0}).admissible_area() == doctest::Approx(pi * 2496.0));
  CHECK(Window(50.0, Disk{{100, 0}, 2.0}).admissible_area() == doctest::Approx(pi * 2500.0));
  // Excluded disk centered on the rim: W = 1 and r = 1 overlap in a lens of
  // area 2 pi / 3 - sqrt(3) / 2.
  CHECK(Window(1.0, Disk{{1, 0}, 1.0}).admissible_area() ==
        doctest::Approx(pi - (2.0 * pi / 3.0 - std::sqrt(3.0) / 2.0)));
}

TEST_CASE("vanishing density gives empty samples") {
  int empty = 0;
  for (std::uint32_t i = 0; i < 1000; ++i) empty += sample_hppp(1e-9, Window(50.0), RngStream{7, i}).empty();
  CHECK(empty >= 999);
}

TEST_CASE("counts follow the Poisson law") {
  constexpr int kN = 10000;
  const double mean = 0.01 * std::numbers::pi * 2500.0;
  std::map<std::uint64_t, int> histogram;
  double total = 0.0;
  for (std::uint32_t i = 0; i < kN; ++i) {
    const PointSample s = sample_hppp(0.01, Window(50.0), RngStream{2024, i});
    ++histogram[s.size()];
    total += static_cast<double>(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) REQUIRE(std::hypot(s.xs()[j], s.ys()[j]) <= 50.0);
  }
  CHECK(std::abs(total / kN - mean) <= 3.0 * std::sqrt(mean / kN));

  // Chi-square on bins pooled until each expects at least 5 counts; the
  // leftover right tail joins the last bin.
  std::vector<std::pair<double, double>> bins;  // observed, expected
  double observed_acc = 0.0, expected_acc = 0.0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    observed_acc += histogram.count(k) ? histogram[k] : 0;
    expected_acc += kN * oracle::poisson_pmf(k, mean);
    if (expected_acc >= 5.0) {
      bins.emplace_back(observed_acc, expected_acc);
      observed_acc = expected_acc = 0.0;
    }
  }
  bins.back().first += observed_acc;
  bins.back().second += expected_acc;
  double chi2 = 0.0;
  for (auto [o, e] : bins) chi2 += (o - e) * (o - e) / e;
  CHECK(chi2 <= oracle::chi2_upper_1pct(static_cast<double>(bins.size() - 1)));
}

TEST_CASE("excluded disk is never sampled and reduces the mean count") {
  const Window w(50.0, Disk{{0, 0}, 2.0});
  double total = 0.0;
  constexpr int kN = 5000;
  for (std::uint32_t i = 0; i < kN; ++i) {
    const PointSample s = sample_hppp(0.01, w, RngStream{99, i});
    for (std::size_t j = 0; j < s.size(); ++j) REQUIRE(std::hypot(s.xs()[j], s.ys()[j]) >= 2.0);
    total += static_cast<double>(s.size());
  }
  const double mean = 0.01 * std::numbers::pi * (2500.0 - 4.0);
  CHECK(std::abs(total / kN - mean) <= 4.0 * std::sqrt(mean / kN));
}

TEST_CASE("identical streams give identical samples") {
  const Window w(30.0, Disk{{1, 0}, 2.0});
  CHECK(sample_hppp(0.05, w, RngStream{8, 4}) == sample_hppp(0.05, w, RngStream{8, 4}));
  CHECK_FALSE(sample_hppp(0.05, w, RngStream{8, 4}) == sample_hppp(0.05, w, RngStream{8, 5}));
}

TEST_CASE("scaling examples and the mapping identity") {
  const PointSample s = sample_hppp(0.04, Window(25.0), RngStream{5, 0});
  CHECK(scale_points(s, 1.0) == s);
  const PointSample t = scale_points(s, 2.0);
  CHECK(t.density() == doctest::Approx(0.01));
  CHECK(t.window().radius() == 50.0);
  // a = 2 and alpha = 4 scale every term by an exact power of two.
  CHECK(shot_noise({0, 0}, t, 4.0, 1.0) == shot_noise({0, 0}, s, 4.0, 1.0) / 16.0);
  for (double a : {0.3, 1.7, 3.1}) {
    for (double alpha : {2.5, 3.0, 4.0}) {
      const double lhs = shot_noise({0, 0}, scale_points(s, a), alpha, 1.0);
      const double rhs = std::pow(a, -alpha) * shot_noise({0, 0}, s, alpha, 1.0);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("superposition examples and the additive identity") {
  const Window w(20.0);
  const PointSample a = sample_hppp(0.01, w, RngStream{6, 0});
  const PointSample b = sample_hppp(0.02, w, RngStream{6, 1});
  CHECK(superpose(a, PointSample(0.0, w)) == PointSample(0.01, w, {a.xs().begin(), a.xs().end()},
                                                          {a.ys().begin(), a.ys().end()}));
  const PointSample u = superpose(a, b);
  CHECK(u.density() == doctest::Approx(0.03));
  CHECK(u.size() == a.size() + b.size());
  const double lhs = shot_noise({0, 0}, u, 4.0, 1.0);
  const double rhs = shot_noise({0, 0}, a, 4.0, 1.0) + shot_noise({0, 0}, b, 4.0, 1.0);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
}

TEST_CASE("scaled processes are statistically indistinguishable from direct samples") {
  constexpr int kN = 10000;
  const Moments scaled = count_moments(kN, [](std::uint32_t i) {
    return scale_points(sample_hppp(0.04, Window(25.0), RngStream{31, i}), 2.0).size();
  });
  const Moments direct = count_moments(kN, [](std::uint32_t i) {
    return sample_hppp(0.01, Window(50.0), RngStream{32, i}).size();
  });
  const double mean = 0.01 * std::numbers::pi * 2500.0;
  CHECK(std::abs(scaled.mean - direct.mean) <= 3.29 * std::sqrt(2.0 * mean / kN));

  // Shot-noise exceedance at the origin, two-proportion z-test.
  int hits_scaled = 0, hits_direct = 0;
  for (std::uint32_t i = 0; i < kN; ++i) {
    hits_scaled += shot_noise({0, 0}, scale_points(sample_hppp(0.04, Window(25.0), RngStream{33, i}), 2.0), 4.0,
                              1.0) > 0.01;
    hits_direct += shot_noise({0, 0}, sample_hppp(0.01, Window(50.0), RngStream{34, i}), 4.0, 1.0) > 0.01;
  }
  const double p = (hits_scaled + hits_direct) / (2.0 * kN);
  CHECK(std::abs(hits_scaled - hits_direct) / double(kN) <= 3.29 * std::sqrt(2.0 * p * (1.0 - p) / kN));
}

TEST_CASE("superposed processes match a direct sample of the summed density") {
  constexpr int kN = 10000;
  const Window w(20.0);
  const Moments sup = count_moments(kN, [&](std::uint32_t i) {
    return superpose(sample_hppp(0.01, w, RngStream{41, i}), sample_hppp(0.02, w, RngStream{42, i})).size();
  });
  const Moments direct = count_moments(kN, [&](std::uint32_t i) { return sample_hppp(0.03, w, RngStream{43, i}).size(); });
  const double mean = 0.03 * std::numbers::pi * 400.0;
  CHECK(std::abs(sup.mean - direct.mean) <= 3.29 * std::sqrt(2.0 * mean / kN));
  CHECK(std::abs(sup.var - mean) <= 5.0 * std::sqrt((2.0 * mean * mean + mean) / kN));
}

TEST_CASE("shot noise at the center is rotation invariant per realization") {
  const PointSample s = sample_hppp(0.05, Window(30.0), RngStream{77, 0});
  const double c = std::cos(0.7), sn = std::sin(0.7);
  PointSample r(s.density(), s.window());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Point2D p = s.point(i);
    r.push_back({c * p.x - sn * p.y, sn * p.x + c * p.y});
  }
  const double a = shot_noise({0, 0}, s, 4.0, 1.0);
  CHECK(std::abs(shot_noise({0, 0}, r, 4.0, 1.0) - a) <= 1e-9 * a);
}

TEST_CASE("center squared distances match the radial law") {
  // Pr(d <= r) = (r / W)^2 for a uniform point of the disk.
  StreamEngine e({12, 0}, 0);
  std::vector<double> d2;
  int inside = 0, total = 0;
  for (int i = 0; i < 2000; ++i) {
    sample_hppp_center_sq_distances(0.01, 50.0, e, d2);
    for (double v : d2) {
      REQUIRE(v > 0.0);
      REQUIRE(v <= 2500.0);
      inside += v <= 625.0;
      ++total;
    }
  }
  CHECK(std::abs(double(inside) / total - 0.25) <= 4.0 * std::sqrt(0.1875 / total));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cogharvest/rng.hpp"

using namespace cogharvest;

TEST_CASE("philox4x32-10 matches the published known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("identical stream and substream reproduce the sequence") {
  StreamEngine a({42, 3}, 7);
  StreamEngine b({42, 3}, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("seed, stream index and substream each change the sequence") {
  auto first = [](RngStream s, std::uint32_t sub) {
    StreamEngine e(s, sub);
    std::vector<std::uint64_t> v(8);
    for (auto& x : v) x = e();
    return v;
  };
  const auto base = first({1, 0}, 0);
  CHECK(first({2, 0}, 0) != base);
  CHECK(first({1, 1}, 0) != base);
  CHECK(first({1, 0}, 1) != base);
  CHECK(first({std::uint64_t{1} << 40, 0}, 0) != first({0, 0}, 0));
}

TEST_CASE("uniform variates stay in their half-open ranges") {
  StreamEngine e({5, 0}, 0);
  double sum = 0.0;
  constexpr int kN = 200000;
  for (int i = 0; i < kN; ++i) {
    const double u = e.uniform();
    const double v = e.uniform_pos();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(v > 0.0);
    REQUIRE(v <= 1.0);
    sum += u;
  }
  // Mean of U(0,1) has standard deviation sqrt(1/12 / n).
  CHECK(std::abs(sum / kN - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / kN));
}

TEST_CASE("poisson variates have the requested mean and variance") {
  for (double mean : {0.3, 4.0, 9.99, 10.0, 78.54, 1234.5}) {
    CAPTURE(mean);
    StreamEngine e({11, 0}, 0);
    constexpr int kN = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < kN; ++i) {
      const double k = static_cast<double>(e.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / kN;
    const double var = s2 / kN - m * m;
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / kN));
    // Var of the sample variance is about (2 mean^2 + mean) / n for a Poisson law.
    CHECK(std::abs(var - mean) < 5.0 * std::sqrt((2.0 * mean * mean + mean) / kN));
  }
}

TEST_CASE("poisson with mean zero is zero") {
  StreamEngine e({0, 0}, 0);
  for (int i = 0; i < 10; ++i) CHECK(e.poisson(0.0) == 0);
}

TEST_CASE("bernoulli frequency matches p") {
  StreamEngine e({3, 9}, 1);
  constexpr int kN = 100000;
  int hits = 0;
  for (int i = 0; i < kN; ++i) hits += e.bernoulli(0.3);
  CHECK(std::abs(hits / double(kN) - 0.3) < 4.0 * std::sqrt(0.21 / kN));
}

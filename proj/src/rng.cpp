#include "cogharvest/rng.hpp"

#include <cmath>

#include "cogharvest/error.hpp"

namespace cogharvest {

std::uint64_t StreamEngine::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;

  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform_pos();
    while (prod > limit) {
      ++k;
      prod *= uniform_pos();
    }
    return k;
  }

  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);

  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform_pos();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace cogharvest

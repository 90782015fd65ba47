#pragma once

// Experiment configuration: UTF-8 text, one `key = value` per line, `#`
// starts a comment. Unknown keys are errors; missing keys take the defaults
// below. Command-line overrides are applied after the file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogharvest/analytic.hpp"

namespace cogharvest {

struct ExperimentConfig {
  NetworkConfig network;
  double window_radius = kDefaultWindowRadius;
  std::uint64_t trials = 100000;
  std::uint64_t slots = 1000000;
  std::uint64_t mu_trials = 200000;
  double mu_tolerance = 1e-4;
  std::uint64_t seed = 0;

  SamplingOptions sampling(unsigned workers = 0) const { return {window_radius, workers}; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Keys in file order of format_config().
const std::vector<std::string>& config_keys();

/// Throws ConfigError carrying the line number (0 for overrides) and key.
ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Every key with its value; reals at 17 significant digits so the text
/// parses back to an identical config.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace cogharvest

#include "cogharvest/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cogharvest/csv.hpp"
#include "cogharvest/error.hpp"

namespace cogharvest {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_real(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_count(std::string_view text, std::uint64_t& out) {
  const char* last = text.data() + text.size();
  if (const auto [ptr, ec] = std::from_chars(text.data(), last, out); ec == std::errc() && ptr == last) return true;
  // Accept integral values written in floating notation, e.g. 1e5.
  double v = 0.0;
  if (!parse_real(text, v) || v < 0.0 || v != std::floor(v) || v > 1.8e19) return false;
  out = static_cast<std::uint64_t>(v);
  return true;
}

using Setter = std::function<bool(ExperimentConfig&, std::string_view)>;

Setter real(double NetworkConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v) { return parse_real(v, c.network.*field); };
}
Setter real(double ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v) { return parse_real(v, c.*field); };
}
Setter count(std::uint64_t ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v) { return parse_count(v, c.*field); };
}

struct KeySpec {
  std::string key;
  Setter set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = [] {
    auto r = [](double NetworkConfig::*f) {
      return [f](const ExperimentConfig& c) { return format_real(c.network.*f); };
    };
    auto re = [](double ExperimentConfig::*f) { return [f](const ExperimentConfig& c) { return format_real(c.*f); }; };
    auto ce = [](std::uint64_t ExperimentConfig::*f) {
      return [f](const ExperimentConfig& c) { return std::to_string(c.*f); };
    };
    return std::vector<KeySpec>{
        {"lambda_p", real(&NetworkConfig::lambda_p), r(&NetworkConfig::lambda_p)},
        {"lambda_s", real(&NetworkConfig::lambda_s), r(&NetworkConfig::lambda_s)},
        {"p_ratio", real(&NetworkConfig::power_ratio), r(&NetworkConfig::power_ratio)},
        {"eta", real(&NetworkConfig::eta), r(&NetworkConfig::eta)},
        {"alpha", real(&NetworkConfig::alpha), r(&NetworkConfig::alpha)},
        {"r_g", real(&NetworkConfig::r_g), r(&NetworkConfig::r_g)},
        {"r_h", real(&NetworkConfig::r_h), r(&NetworkConfig::r_h)},
        {"theta_p", real(&NetworkConfig::theta_p), r(&NetworkConfig::theta_p)},
        {"theta_s", real(&NetworkConfig::theta_s), r(&NetworkConfig::theta_s)},
        {"eps_p", real(&NetworkConfig::eps_p), r(&NetworkConfig::eps_p)},
        {"eps_s", real(&NetworkConfig::eps_s), r(&NetworkConfig::eps_s)},
        {"window_radius", real(&ExperimentConfig::window_radius), re(&ExperimentConfig::window_radius)},
        {"trials", count(&ExperimentConfig::trials), ce(&ExperimentConfig::trials)},
        {"slots", count(&ExperimentConfig::slots), ce(&ExperimentConfig::slots)},
        {"mu_trials", count(&ExperimentConfig::mu_trials), ce(&ExperimentConfig::mu_trials)},
        {"mu_tolerance", real(&ExperimentConfig::mu_tolerance), re(&ExperimentConfig::mu_tolerance)},
        {"seed", count(&ExperimentConfig::seed), ce(&ExperimentConfig::seed)},
    };
  }();
  return specs;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& s : key_specs()) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

struct Invariant {
  const char* key;
  const char* description;
  bool (*holds)(const ExperimentConfig&);
};

// Checked in order; the first failure is reported against `key`.
constexpr Invariant kInvariants[] = {
    {"lambda_p", "lambda_p >= 0", [](const ExperimentConfig& c) { return c.network.lambda_p >= 0.0; }},
    {"lambda_s", "lambda_s >= 0", [](const ExperimentConfig& c) { return c.network.lambda_s >= 0.0; }},
    {"p_ratio", "p_ratio > 0", [](const ExperimentConfig& c) { return c.network.power_ratio > 0.0; }},
    {"eta", "0 < eta <= 1", [](const ExperimentConfig& c) { return c.network.eta > 0.0 && c.network.eta <= 1.0; }},
    {"alpha", "alpha > 2", [](const ExperimentConfig& c) { return c.network.alpha > 2.0; }},
    {"r_g", "r_g > 0", [](const ExperimentConfig& c) { return c.network.r_g > 0.0; }},
    {"r_h", "0 < r_h < r_g", [](const ExperimentConfig& c) { return c.network.r_h > 0.0 && c.network.r_h < c.network.r_g; }},
    {"theta_p", "theta_p > 0", [](const ExperimentConfig& c) { return c.network.theta_p > 0.0; }},
    {"theta_s", "theta_s > 0", [](const ExperimentConfig& c) { return c.network.theta_s > 0.0; }},
    {"eps_p", "0 < eps_p < 1", [](const ExperimentConfig& c) { return c.network.eps_p > 0.0 && c.network.eps_p < 1.0; }},
    {"eps_s", "0 < eps_s < 1", [](const ExperimentConfig& c) { return c.network.eps_s > 0.0 && c.network.eps_s < 1.0; }},
    {"window_radius", "window_radius > r_g + 1",
     [](const ExperimentConfig& c) { return c.window_radius > c.network.r_g + 1.0; }},
    {"trials", "trials >= 1", [](const ExperimentConfig& c) { return c.trials >= 1; }},
    {"slots", "slots >= 1000 (warm-up length)", [](const ExperimentConfig& c) { return c.slots >= 1000; }},
    {"mu_trials", "mu_trials >= 1", [](const ExperimentConfig& c) { return c.mu_trials >= 1; }},
    {"mu_tolerance", "mu_tolerance > 0", [](const ExperimentConfig& c) { return c.mu_tolerance > 0.0; }},
};

void apply(ExperimentConfig& cfg, std::string_view key, std::string_view value, std::size_t line,
           std::map<std::string, std::size_t, std::less<>>& origin) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(line, std::string(key), "unknown key");
  if (!spec->set(cfg, value)) {
    throw ConfigError(line, std::string(key), "cannot parse value '" + std::string(value) + "'");
  }
  origin[std::string(key)] = line;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& s : key_specs()) k.push_back(s.key);
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  ExperimentConfig cfg;
  std::map<std::string, std::size_t, std::less<>> origin;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    if (origin.contains(key)) throw ConfigError(line_no, std::string(key), "duplicate key");
    apply(cfg, key, value, line_no, origin);
  }
  for (const auto& [key, value] : overrides) apply(cfg, key, trim(value), 0, origin);

  for (const auto& inv : kInvariants) {
    if (!inv.holds(cfg)) {
      const auto it = origin.find(inv.key);
      throw ConfigError(it == origin.end() ? 0 : it->second, inv.key,
                        std::string("invariant violated: ") + inv.description);
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string format_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& s : key_specs()) out += s.key + " = " + s.get(cfg) + "\n";
  return out;
}

}  // namespace cogharvest

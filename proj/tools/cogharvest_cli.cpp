// Command-line front end: cogharvest <command> [options].
//
// Exit status: 0 success, 1 a validation check failed, 2 usage or config
// error (including arguments the library rejects).

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cogharvest/config.hpp"
#include "cogharvest/error.hpp"
#include "cogharvest/experiments.hpp"
#include "cogharvest/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

int write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cogharvest;

  CLI::App app{"Cognitive-radio RF harvesting: closed forms, Monte Carlo and throughput optimization"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_path;
  unsigned workers = 0;
  bool dump_config = false;
  app.add_option("--config", config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output file (default: standard output)");
  app.add_option("--workers", workers, "Worker threads, 0 = one per hardware thread");
  app.add_flag("--dump-config", dump_config, "Print the effective config and exit");

  // Every config key doubles as an override flag; --seed is one of them.
  std::map<std::string, std::optional<std::string>> overrides;
  for (const std::string& key : config_keys()) {
    app.add_option("--" + key, overrides[key], "Override config key " + key);
  }

  CLI::App* nominal = app.add_subcommand("nominal", "Nominal density for an outage target");
  std::optional<double> target;
  std::string which = "p";
  nominal->add_option("--target", target, "Outage target (default eps_p or eps_s)");
  nominal->add_option("--which", which, "Network: p (primary) or s (secondary)")
      ->check(CLI::IsMember({"p", "s"}));

  CLI::App* sweep = app.add_subcommand("outage-sweep", "Simulated vs approximated outage over theta");
  std::vector<double> thetas;
  sweep->add_option("--theta", thetas, "Target SIRs (default: 20 log-spaced in [0.1, 100])")->delimiter(',');

  CLI::App* optimize = app.add_subcommand("optimize", "Throughput-optimal power ratio and ST density");

  CLI::App* tsweep = app.add_subcommand("throughput-sweep", "Optimum versus PT density");
  double lambda_p_min = 0.002;
  double lambda_p_max = 0.02;
  std::size_t steps = 10;
  tsweep->add_option("--lambda_p_min", lambda_p_min, "Smallest PT density");
  tsweep->add_option("--lambda_p_max", lambda_p_max, "Largest PT density");
  tsweep->add_option("--steps", steps, "Number of linearly spaced densities")->check(CLI::PositiveNumber);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Run the check suite");
  ValidationOptions vopts;
  validate_cmd->add_option("--tolerance-scale", vopts.tolerance_scale, "Multiply every tolerance")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--only", vopts.only, "Comma-separated check groups (C1..C7)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ConfigOverrides ov;
    for (const std::string& key : config_keys()) {
      if (overrides[key]) ov.emplace_back(key, *overrides[key]);
    }
    const ExperimentConfig cfg = config_path.empty() ? parse_config("", ov) : parse_config_file(config_path, ov);

    if (dump_config) return write_output(out_path, format_config(cfg));

    if (nominal->parsed()) {
      const auto w = which == "p" ? NominalWhich::Primary : NominalWhich::Secondary;
      return write_output(out_path, cmd_nominal(cfg, w, target, workers).to_string());
    }
    if (sweep->parsed()) {
      if (thetas.empty()) thetas = default_theta_grid();
      return write_output(out_path, cmd_outage_sweep(cfg, thetas, workers).to_string());
    }
    if (optimize->parsed()) {
      const OptimizeReport report = cmd_optimize(cfg, workers);
      std::cerr << report.summary();
      return write_output(out_path, report.table().to_string());
    }
    if (tsweep->parsed()) {
      return write_output(out_path, cmd_throughput_sweep(cfg, lambda_p_min, lambda_p_max, steps, workers).to_string());
    }
    if (validate_cmd->parsed()) {
      vopts.workers = workers;
      const std::vector<CheckResult> checks = run_validation(cfg, vopts);
      const int written = write_output(out_path, format_report(checks));
      if (written != kExitOk) return written;
      return all_passed(checks) ? kExitOk : kExitCheckFailed;
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

#pragma once

// Cross-module check suite run by `cogharvest validate`. Every check reports
// what it measured and the bound it was held to; the report text depends only
// on the config, never on timing or the worker count.

#include <string>
#include <vector>

#include "cogharvest/config.hpp"

namespace cogharvest {

enum class Relation { AtMost, AtLeast };

struct CheckResult {
  std::string group;  ///< "C1" ... "C7"
  std::string name;
  double measured = 0.0;
  Relation relation = Relation::AtMost;
  double bound = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  unsigned workers = 0;
  /// Multiplies every statistical or numerical tolerance. Structural bounds
  /// (signs, counts of mismatches, the 10x divergence ratio) are unaffected.
  double tolerance_scale = 1.0;
  /// Groups to run; empty runs all of them.
  std::vector<std::string> only;
};

/// Group identifiers in report order.
const std::vector<std::string>& validation_groups();

std::vector<CheckResult> run_validation(const ExperimentConfig& cfg, const ValidationOptions& opts = {});

/// One line per check plus a summary line.
std::string format_report(const std::vector<CheckResult>& checks);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace cogharvest

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cogharvest {

/// Argument outside the documented domain of an operation.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A sample point coincides with the evaluation point of a power-law kernel.
/// Callers resample the offending point.
class SingularityError : public std::domain_error {
public:
  explicit SingularityError(std::size_t index)
      : std::domain_error("sample point " + std::to_string(index) +
                          " is at zero distance from the evaluation point"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// Two-state battery chain whose steady state is undefined (p_h = 0, p_g = 1).
class DegenerateChainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Bisection could not bracket the requested probability.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration file or override problem. `line` is 0 for command-line overrides.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::size_t line, std::string key, const std::string& what)
      : std::runtime_error(format(line, key, what)), line_(line), key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

private:
  static std::string format(std::size_t line, const std::string& key, const std::string& what) {
    std::string where = line == 0 ? std::string("command line") : "line " + std::to_string(line);
    if (!key.empty()) where += ", key '" + key + "'";
    return where + ": " + what;
  }

  std::size_t line_;
  std::string key_;
};

}  // namespace cogharvest

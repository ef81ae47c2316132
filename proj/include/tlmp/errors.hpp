#pragma once

#include <stdexcept>
#include <string>

namespace tlmp {

/// Formula text could not be parsed. Carries the source position and the
/// token set that would have been accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column,
             std::string expected = {})
      : std::runtime_error(message + " at " + std::to_string(line) + ":" +
                           std::to_string(column) +
                           (expected.empty() ? "" : " (expected " + expected + ")")),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

/// A formula could not be evaluated over a trace (unregistered predicate,
/// dimension mismatch, empty trace, ...).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario configuration rejected; key_path names the offending entry,
/// e.g. "regions[0].radius".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key_path, const std::string& message)
      : std::runtime_error(key_path + ": " + message), key_path_(key_path) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

/// Numerical integration failed; step() names the first offending step.
class RolloutError : public std::runtime_error {
 public:
  RolloutError(const std::string& message, long step)
      : std::runtime_error(message + " at step " + std::to_string(step)),
        step_(step) {}

  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace tlmp

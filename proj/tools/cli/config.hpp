#pragma once
// Experiment configuration: a TOML-compatible subset of `key = value` lines
// with [section] headers or dotted keys. Values are integers, reals, quoted
// strings, booleans and flat arrays of numbers.
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cli {

enum ExitCode { kExitOk = 0, kExitNumeric = 1, kExitUsage = 2 };

/// Carries the exit code and a one-line message.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, std::string tag, const std::string& msg)
      : std::runtime_error(msg), exit_code_(exit_code), tag_(std::move(tag)) {}
  int exit_code() const { return exit_code_; }
  const std::string& tag() const { return tag_; }

 private:
  int exit_code_;
  std::string tag_;
};

using Value = std::variant<std::int64_t, double, bool, std::string, std::vector<double>>;

/// Normalized configuration: every schema key holds a value after parsing,
/// except optional keys without a default that were not given.
class ExperimentConfig {
 public:
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  /// Sets a value after type and range checks (exit 2 on violation).
  void set(const std::string& key, Value v);
  /// Command kind ("flow run", ...), if the config names one.
  std::optional<std::string> command() const;
  const std::map<std::string, Value>& values() const { return values_; }

  bool operator==(const ExperimentConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, Value> values_;
};

/// Known commands as "module verb".
const std::vector<std::string>& known_commands();

/// Parses and validates. If `command` is given (or the text has a
/// `command` key) the keys required by that command must be present.
ExperimentConfig parse_config(const std::string& text, const std::optional<std::string>& command = std::nullopt);
/// Checks cross-key ranges and the keys required by `command`.
void validate(const ExperimentConfig& cfg, const std::string& command);
/// Canonical text; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& cfg);

/// Round-trip formatting of a double with 17 significant digits.
std::string format_real(double v);

}  // namespace cli

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace platelab {

/// One "key = value" line of a config file.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// Sections of "key = value" lines; keys before any "[section]" header are rejected.
using RawConfig = std::map<std::string, std::map<std::string, ConfigEntry>>;

struct GridBlock {
  int d = 0, n = 0;
  double L = 0.0;
};
struct TimeBlock {
  double T = 0.0;
  int m = 0;
};
struct IndexBlock {
  std::string s = "0", q, r, alpha = "2", beta = "3";
};
struct EnsembleBlock {
  int count = 50;
  std::uint64_t seed = 1;
};

/// Validated experiment description. Optional per-command knobs live in
/// `extra` as "section.key" -> value and are read with their defaults by the
/// command itself.
struct ExperimentConfig {
  std::string command;
  GridBlock grid;
  TimeBlock time;
  IndexBlock indices;
  EnsembleBlock ensemble;
  std::string output = ".";
  std::map<std::string, std::string> extra;

  double extra_double(const std::string& key, double fallback) const;
  int extra_int(const std::string& key, int fallback) const;
  std::string extra_string(const std::string& key, const std::string& fallback) const;
};

const std::vector<std::string>& known_commands();

/// Line-based parse; throws ConfigError listing every problem found.
RawConfig parse_raw_config(const std::string& text);
/// Same, appending problems to errors instead of throwing.
RawConfig parse_raw_config(const std::string& text, std::vector<std::string>& errors);
/// parse_raw_config followed by typed validation for the command named in
/// [run] command (or `command` when given, which takes precedence).
ExperimentConfig parse_config(const std::string& text, const std::string& command = "");
/// Applies "section.key=value" or bare "key=value" overrides (bare keys are
/// looked up in the schema) on top of a raw config.
void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides);
ExperimentConfig build_config(const RawConfig& raw, const std::string& command = "");
/// build_config that also reports earlier problems: throws one ConfigError
/// holding prior_errors followed by the validation errors.
ExperimentConfig build_config(const RawConfig& raw, const std::string& command,
                              std::vector<std::string> prior_errors);

} // namespace platelab

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spinsim {

struct OutputSpec {
  std::string path;            // empty: no file written
  std::string format = "json"; // "json" or "csv"
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// One experiment run: name, parameter map (scalars or lists; lists sweep a
/// grid), trial count, seed, output destination.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, nlohmann::json> parameters;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  OutputSpec output;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates a config. Throws ConfigError on unknown experiment
/// names, unknown parameter names, or non-finite angles.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json emit_config(const ExperimentConfig& config);

/// One measured (or exactly computed) quantity of a run. Exact quantities
/// have n = 0 and std_error = 0.
struct Quantity {
  std::string name;
  std::map<std::string, double> params;       // grid-point coordinates
  std::map<std::string, std::string> labels;  // e.g. model names
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> reference;  // analytic value, when one exists
  std::string reference_formula;    // human-readable law behind the reference
  double z_score = 0.0;
  bool bound = false;  // pass means |mean| <= reference + 4 sigma
  bool pass = true;
  bool defined = true;  // false when the estimate had no accepted samples
  nlohmann::json extra;  // witness / certificate payloads, optional
};

struct ResultRecord {
  ExperimentConfig config;
  std::vector<Quantity> quantities;
  double wall_clock_ms = 0.0;
  bool all_pass = true;
  bool any_undefined = false;
};

/// Dispatches to the named experiment. Deterministic given (config, seed).
ResultRecord run(const ExperimentConfig& config);

/// Canonical serializations. Wall-clock time is deliberately left out so
/// identical (config, seed) runs emit byte-identical files.
std::string to_json(const ResultRecord& record);
std::string to_csv(const ResultRecord& record);

/// Writes the record to config.output (no-op on an empty path).
void emit(const ResultRecord& record);

// Exit statuses: 0 pass, 1 statistical fail, 2 config error, 3 undefined.
inline constexpr int exit_pass = 0;
inline constexpr int exit_statistical_fail = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_undefined = 3;

int exit_code(const ResultRecord& record);

}  // namespace spinsim

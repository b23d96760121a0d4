#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinsim/angle.hpp"
#include "spinsim/report.hpp"

namespace {

using nlohmann::json;

// Parameters interpreted as angles, for the --degrees convenience flag.
const std::set<std::string> angle_keys = {"theta", "alpha",   "beta",     "delta",
                                          "a",     "a_prime", "b",        "b_prime",
                                          "x",     "delta_fg", "delta_eg", "arc_offset"};

json parse_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare string
  return v;
}

json degrees_to_radians(const json& v) {
  constexpr double k = spinsim::pi / 180.0;
  if (v.is_number()) return v.get<double>() * k;
  if (v.is_array()) {
    json out = json::array();
    for (const auto& e : v) out.push_back(degrees_to_radians(e));
    return out;
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical spin-1/2 hidden-variable model simulator and diagnostics"};

  std::string config_path, experiment, out_path, format;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  bool degrees = false;
  std::vector<std::string> params;

  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--experiment", experiment,
                 "Experiment name: baseline-law, baseline-marginal, sequential-conditional, "
                 "variation-1..5, pitowsky-frequency, feasibility, chsh, postselected-chsh");
  app.add_option("--seed", seed, "RNG seed (default 0)");
  app.add_option("--trials", trials, "MC trials per grid point (default 100000)");
  app.add_option("--out", out_path, "Output file path");
  app.add_option("--format", format, "Output format: json or csv");
  app.add_flag("--degrees", degrees, "Interpret angle parameters as degrees");
  app.add_option("-P,--param", params,
                 "Experiment parameter, key=value (value: number, JSON list, or string)");

  CLI11_PARSE(app, argc, argv);

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw spinsim::ConfigError("cannot read config file: " + config_path);
      f >> j;
    }
    if (!experiment.empty()) j["experiment"] = experiment;
    if (trials != 0) j["trials"] = trials;
    if (app.count("--seed") != 0) j["seed"] = seed;
    if (!out_path.empty()) j["output"]["path"] = out_path;
    if (!format.empty()) j["output"]["format"] = format;
    for (const std::string& p : params) {
      auto eq = p.find('=');
      if (eq == std::string::npos)
        throw spinsim::ConfigError("parameter must be key=value: " + p);
      std::string key = p.substr(0, eq);
      json value = parse_value(p.substr(eq + 1));
      if (degrees && angle_keys.contains(key)) value = degrees_to_radians(value);
      j["parameters"][key] = value;
    }

    spinsim::ExperimentConfig config = spinsim::parse_config(j);
    spinsim::ResultRecord record = spinsim::run(config);
    spinsim::emit(record);

    for (const auto& q : record.quantities) {
      std::printf("%-24s", q.name.c_str());
      for (const auto& [k, v] : q.labels) std::printf(" %s=%s", k.c_str(), v.c_str());
      for (const auto& [k, v] : q.params) std::printf(" %s=%.6g", k.c_str(), v);
      std::printf("  mean=%.6g se=%.3g", q.mean, q.std_error);
      if (q.reference) std::printf(" ref=%.6g z=%.3g", *q.reference, q.z_score);
      std::printf("  [%s]\n", !q.defined ? "UNDEFINED" : (q.pass ? "pass" : "FAIL"));
    }
    std::fprintf(stderr, "wall clock: %.1f ms\n", record.wall_clock_ms);
    return spinsim::exit_code(record);
  } catch (const spinsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return spinsim::exit_config_error;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return spinsim::exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return spinsim::exit_config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return spinsim::exit_config_error;
  }
}

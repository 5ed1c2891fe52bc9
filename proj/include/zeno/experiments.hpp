// Config-driven experiment runner behind the zeno command-line tool.
//
// A config is a JSON object:
//   {
//     "experiment": "fig4",
//     "output": "results",          // directory; one CSV per panel
//     "threads": 1,
//     "seed": 0,                    // custom experiment, trajectory mode only
//     "integrator": { "method": "adaptive", "rtol": 1e-9, ... },
//     "grid": { ...experiment parameters... }
//   }
// Missing grid parameters take the documented defaults; unknown keys are
// errors. reference_markdown() renders every experiment, parameter and default.
#pragma once

#include "zeno/integrator.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeno::cli {

using Json = nlohmann::json;

/// Invalid config. Each message is "line N: <field>: <problem>".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Failure while running a valid config; the message names the grid point.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamKind { IntList, DoubleList, Int, Double, Bool, String };

struct ParamSchema {
  std::string name;
  ParamKind kind;
  Json default_value;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool hi_open = false;
  std::vector<std::string> choices;  ///< String parameters only.
  std::string help;
};

struct ExperimentInfo {
  std::string id;
  std::string summary;
  std::vector<ParamSchema> params;
  std::vector<std::string> columns;  ///< "file: col1, col2, ..."
};

const std::vector<ExperimentInfo>& experiment_catalog();
const ExperimentInfo& experiment_info(const std::string& id);

struct ExperimentConfig {
  std::string experiment;
  std::filesystem::path output = ".";
  int threads = 1;
  std::uint64_t seed = 0;
  IntegratorConfig integrator;
  Json grid;  ///< Fully resolved: every schema parameter present.

  Json to_json() const;
};

/// Parses and validates config text. Collects every problem before throwing.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig validate_config(const std::filesystem::path& path);

/// Runs the experiment and writes its CSV files; returns their paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config);

std::string reference_markdown();

/// printf %.17g: enough digits to round-trip any double.
std::string format_double(double value);

}  // namespace zeno::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlab/analytic_bounds.hpp"
#include "driftlab/conditions.hpp"
#include "driftlab/csv.hpp"
#include "driftlab/process.hpp"
#include "driftlab/simulation.hpp"

namespace drift::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2 };

/// Fully resolved experiment. Every field is addressable as "section.key"
/// from presets, INI files and --set.
struct ExperimentConfig {
  std::string name = "custom";

  std::string process = "geometric-walk";
  int n = 15;
  int lambda_offspring = 4;
  int mu = 2;
  double walk_eps = 0.2;
  double walk_delta = 1.0;
  std::optional<double> start;  ///< defaults to window.b
  double step = -1.0;

  double a = 0.0;
  double b = 10.0;

  ConditionParams condition{0.2, 1.0, 2.0, 64};
  TailVariant variant = TailVariant::two_sided;
  std::string mode = "auto";  ///< auto, exact, empirical

  SimulationBudget budget{1000, 100, 1};
  std::string horizon;  ///< empty (= max_steps), "auto" or an integer
  double prob_target = 0.1;

  std::string family = "geometric-walk";
  std::vector<double> ells{10, 20, 30, 40};

  std::string suite = "all";
  SweepGrid grid;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

void set_option(ExperimentConfig& config, const std::string& key, const std::string& value);
void apply_settings(ExperimentConfig& config, const Settings& settings);
/// Sectioned key=value file ([section] headers, ';' or '#' comments).
Settings read_config_file(const std::string& path);
/// Resolved configuration in canonical order, as written to CSV provenance.
Provenance describe(const ExperimentConfig& config);

ProcessPtr build_process(const ExperimentConfig& config);

struct Preset {
  std::string name;
  std::string command;
  std::string description;
  Settings settings;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

/// Entry point shared by the executable and the tests; returns the exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace drift::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tlmp/scenario.hpp"

namespace tlmp {

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;     // overrides the config seed
  std::optional<double> k1;
  std::optional<double> k2;
  std::optional<int> max_updates;
  int threads = 1;
  bool log_progress = false;  // one line per update on stdout
};

struct RunArtifacts {
  std::filesystem::path trajectory_csv;
  std::filesystem::path learning_curve_csv;
  std::filesystem::path parameters_csv;
  std::filesystem::path summary_json;
  bool converged = false;
  bool satisfied = false;
  double robustness = 0.0;  // exact weighted robustness of the final trajectory
  int updates = 0;
  double wall_seconds = 0.0;
};

/// Loads the scenario, learns the shape parameters, and writes the
/// trajectory, learning curve, final parameters and a summary into out_dir.
/// Deterministic given config + seed.
RunArtifacts run_experiment(const RunOptions& opts);

struct MonitorReport {
  bool satisfied = false;
  double robustness = 0.0;
  double smoothed = 0.0;
  double gap = 0.0;  // robustness - smoothed
  double k1 = 0.0;
  double k2 = 0.0;
};

/// Evaluates a stored trace against a formula under the scenario's
/// predicates. Empty formula_text uses the scenario's own formula.
MonitorReport monitor(const std::string& formula_text,
                      const std::filesystem::path& trace_csv,
                      const std::filesystem::path& scenario_config,
                      std::optional<double> k1 = {}, std::optional<double> k2 = {});

}  // namespace tlmp

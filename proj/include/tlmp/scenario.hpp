#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tlmp/dmp.hpp"
#include "tlmp/formula.hpp"
#include "tlmp/optimizer.hpp"

namespace tlmp {

/// Circular region (or obstacle) in the 2-D workspace, meters.
struct Region {
  std::string name;
  Eigen::Vector2d center;
  double radius = 0.0;
};

/// Signed distance into the region: positive inside, zero on the boundary.
double region_robustness(const Eigen::Vector2d& point, const Region& region);

/// Clearance from the obstacle: positive when outside.
double obstacle_clearance(const Eigen::Vector2d& point, const Region& obstacle);

struct ScenarioSpec {
  Eigen::Vector2d start;
  Eigen::Vector2d goal;
  std::vector<Region> regions;
  std::vector<Region> obstacles;
  std::string formula;
  std::map<std::string, double> weights;  // named weights usable in the formula
  OptimizerConfig optimizer;
  SmoothingParams smoothing;
  IntegrationConfig integration;
};

/// Sequential A-then-B reaching with two obstacles, unit weights.
ScenarioSpec build_case1();

/// Visit A or B (weighted preference), then the goal region, obstacle in the
/// middle.
ScenarioSpec build_case2(double w_a, double w_b);

/// Binds in(NAME) -> region_robustness, clear(NAME) -> obstacle_clearance and
/// dist(NAME) -> center distance over the scenario geometry. Names resolve
/// against regions first, then obstacles.
PredicateRegistry make_registry(const ScenarioSpec& scenario);

/// Parses the scenario formula with its named weights.
Formula parse_scenario_formula(const ScenarioSpec& scenario);

/// 2-D movement primitive from start to goal with the case-study gains and
/// kernel count, zero-initialized shape parameters, spanning the scenario's
/// integration horizon.
DmpSystem make_dmp(const ScenarioSpec& scenario);

/// Distance-based baseline cost: obstacle-penetration depths weighted by c1
/// against go-near-the-regions distances weighted by c2. Requires regions
/// named A and B.
double conventional_cost(const Trace& trace, const ScenarioSpec& scenario,
                         double c1, double c2);

/// Number of primitives and optimized parameters a per-goal sequential
/// decomposition would need for the same task.
struct SequentialDecomposition {
  int dmp_count = 0;
  int parameter_count = 0;
};
SequentialDecomposition sequential_goal_parameter_counts(int space_dims, int goals,
                                                         int kernels_per_dmp);

/// JSON scenario I/O. Unknown keys are rejected; validation failures carry
/// the key path (e.g. "regions[0].radius").
ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario_json(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& scenario);

}  // namespace tlmp

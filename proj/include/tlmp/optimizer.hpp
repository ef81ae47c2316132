#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "tlmp/dmp.hpp"
#include "tlmp/formula.hpp"
#include "tlmp/trace.hpp"

namespace tlmp {

/// Gaussian search distribution over stacked shape parameters.
struct SearchDistribution {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // symmetric positive semidefinite
};

struct OptimizerConfig {
  int sample_count = 20;   // M: rollouts per update
  double eliteness = 10.0; // h: sharpness of the cost-exponentiated weights
  double lambda_init = 0.05;
  double lambda_min = 0.05;
  double lambda_max = std::numeric_limits<double>::infinity();  // inf: no upper clamp
  int max_updates = 300;
  double convergence_cost = 1e-6;  // on the cost of the mean-parameter rollout
  std::uint64_t seed = 0;
  int threads = 1;  // parallelism of the per-update cost evaluations
};

/// Deterministic per-(update, sample) substreams derived from one master
/// seed, so evaluation order and thread count cannot change the draws.
class SubstreamRng {
 public:
  explicit SubstreamRng(std::uint64_t master_seed) : master_(master_seed) {}

  std::mt19937_64 engine(std::uint64_t update, std::uint64_t sample) const;

 private:
  std::uint64_t master_;
};

/// Draws `count` vectors mean + eps, eps zero-mean Gaussian with the
/// distribution's covariance (symmetric eigendecomposition; negative
/// eigenvalues clamped to zero before factorization).
std::vector<Eigen::VectorXd> sample_parameters(const SearchDistribution& dist,
                                               int count, const SubstreamRng& rng,
                                               std::uint64_t update);

/// Normalized exponentiation of costs: P_m = exp(-h*(J_m - J_min)/(J_max -
/// J_min)), normalized to sum 1. Degenerate range or h = 0 gives uniform
/// weights.
Eigen::VectorXd compute_sample_weights(const std::vector<double>& costs,
                                       double eliteness);

/// Clamps the eigenvalues of a symmetric matrix into [lambda_min, lambda_max]
/// (an infinite lambda_max disables the upper clamp) and reconstructs.
Eigen::MatrixXd bound_covariance(const Eigen::MatrixXd& sigma, double lambda_min,
                                 double lambda_max);

/// Weighted-averaging update: covariance from the spread of the samples about
/// the current mean, bounded; then the mean moves to the weighted average of
/// the samples.
SearchDistribution update_distribution(const SearchDistribution& dist,
                                       const std::vector<Eigen::VectorXd>& samples,
                                       const Eigen::VectorXd& weights,
                                       double lambda_min, double lambda_max);

/// Cost of one candidate. `aux` is an optional metric carried into the
/// history (the trajectory front-end stores the smoothed robustness there).
struct CostEval {
  double cost = 0.0;
  double aux = std::numeric_limits<double>::quiet_NaN();
};

using CostFunction = std::function<CostEval(const Eigen::VectorXd&)>;

struct UpdateRecord {
  double sample_mean_cost = 0.0;  // mean over the M explored samples
  double sample_min_cost = 0.0;
  double mean_cost = 0.0;  // cost at the distribution mean before this update
  double mean_aux = 0.0;
};

struct OptimizationResult {
  Eigen::VectorXd best;  // final distribution mean
  std::vector<UpdateRecord> history;
  bool converged = false;
  int updates_used = 0;
  double final_cost = 0.0;  // cost at the final mean
  double final_aux = 0.0;
};

/// Called once per loop iteration with the current mean and its evaluation,
/// before the convergence test.
using ProgressCallback =
    std::function<void(int update, const Eigen::VectorXd& mean, const CostEval&)>;

/// Black-box stochastic minimization: Gaussian exploration, cost-weighted
/// averaging, eigenvalue-bounded covariance adaptation. Deterministic for a
/// fixed config regardless of cfg.threads.
OptimizationResult minimize(const CostFunction& cost, const Eigen::VectorXd& initial,
                            const OptimizerConfig& cfg,
                            const ProgressCallback& progress = {});

/// Cost of a trajectory against a specification: the negated smoothed
/// robustness when negative, else zero.
double tltl_cost(const Trace& trace, const Formula& formula,
                 const PredicateRegistry& registry, const SmoothingParams& sp);

/// Learns shape parameters so the generated trajectory satisfies the
/// specification: each candidate is rolled out and scored with tltl_cost.
OptimizationResult optimize(const DmpSystem& sys, const IntegrationConfig& cfg_int,
                            const Formula& formula, const PredicateRegistry& registry,
                            const SmoothingParams& sp, const OptimizerConfig& cfg,
                            const ProgressCallback& progress = {});

/// CSV `update,mean_cost,min_cost,mean_robustness`, one row per update.
void write_learning_curve_csv(const OptimizationResult& result,
                              const std::filesystem::path& path);

/// CSV of the stacked parameter values, one per line.
void write_parameters_csv(const Eigen::VectorXd& params,
                          const std::filesystem::path& path);

Eigen::VectorXd read_parameters_csv(const std::filesystem::path& path);

}  // namespace tlmp

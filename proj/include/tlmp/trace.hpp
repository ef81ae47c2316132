#pragma once

#include <Eigen/Core>
#include <filesystem>

namespace tlmp {

/// Finite, uniformly sampled sequence of system states. Row t of states()
/// is the d-dimensional state at time t*dt. Immutable after construction.
class Trace {
 public:
  /// states: (T+1) x d, one row per sample; dt: sampling period in seconds.
  Trace(Eigen::MatrixXd states, double dt);

  int length() const { return static_cast<int>(states_.rows()); }
  int dim() const { return static_cast<int>(states_.cols()); }
  double dt() const { return dt_; }
  double duration() const { return dt_ * (length() - 1); }

  const Eigen::MatrixXd& states() const { return states_; }
  Eigen::VectorXd state(int t) const { return states_.row(t).transpose(); }

 private:
  Eigen::MatrixXd states_;
  double dt_;
};

/// Writes `t,x0,x1,...` rows with enough digits to reproduce the doubles.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace tlmp

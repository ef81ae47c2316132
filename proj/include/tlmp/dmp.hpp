#pragma once

#include <Eigen/Core>

#include "tlmp/trace.hpp"

namespace tlmp {

/// Gaussian kernel layout in phase space, shared by all dimensions.
/// Centers are strictly decreasing (the phase decays from 1 toward 0);
/// widths are the kernel variances.
struct KernelLayout {
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;

  int size() const { return static_cast<int>(centers.size()); }
};

/// Places `kernel_count` centers at exp(-alpha_s*tau*t_i) for t_i equally
/// spaced over [0, duration], with widths chosen so each kernel's activation
/// at its neighboring center is 0.5.
KernelLayout default_kernel_layout(int kernel_count, double alpha_s, double tau,
                                   double duration);

/// Unnormalized kernel activations at phase s, entries in (0, 1].
Eigen::VectorXd basis_activations(double phase, const KernelLayout& layout);

/// Phase-gated normalized-kernel forcing value for one dimension.
double forcing_term(double phase, const Eigen::VectorXd& theta, double goal,
                    double start, const KernelLayout& layout);

struct DmpGains {
  double alpha_z = 25.0;
  double beta_z = 6.25;   // alpha_z/4: critically damped
  double alpha_s = 4.0;
  double tau = 1.0;
};

/// Multi-dimensional movement primitive: one damped point attractor per
/// dimension, coupled only through the shared phase variable.
struct DmpSystem {
  Eigen::VectorXd start;   // per-dimension initial position
  Eigen::VectorXd goal;    // per-dimension attractor
  Eigen::MatrixXd theta;   // dims x kernel_count shape parameters
  DmpGains gains;
  KernelLayout layout;

  int dims() const { return static_cast<int>(start.size()); }
  int kernel_count() const { return layout.size(); }
  int parameter_count() const { return dims() * kernel_count(); }

  /// Shape parameters as one vector, dimension-major.
  Eigen::VectorXd stacked_parameters() const;
  void set_stacked_parameters(const Eigen::VectorXd& stacked);
};

/// Builds a system with zero shape parameters and the default kernel layout
/// spanning `duration`.
DmpSystem make_dmp_system(Eigen::VectorXd start, Eigen::VectorXd goal,
                          int kernel_count, const DmpGains& gains,
                          double duration);

struct IntegrationConfig {
  double dt = 0.005;  // seconds
  int steps = 200;
};

/// Integrates the system with explicit Euler (phase in closed form) and
/// returns the position trace, length steps+1, first state = start.
Trace rollout(const DmpSystem& sys, const IntegrationConfig& cfg);

}  // namespace tlmp

#include "tlmp/dmp.hpp"

#include <cmath>
#include <stdexcept>

#include "tlmp/errors.hpp"

namespace tlmp {

KernelLayout default_kernel_layout(int kernel_count, double alpha_s, double tau,
                                   double duration) {
  if (kernel_count < 1) throw std::invalid_argument("kernel_count must be >= 1");
  if (!(alpha_s > 0.0) || !(tau > 0.0) || !(duration > 0.0))
    throw std::invalid_argument("alpha_s, tau and duration must be positive");

  KernelLayout layout;
  layout.centers.resize(kernel_count);
  layout.widths.resize(kernel_count);
  for (int i = 0; i < kernel_count; ++i) {
    double t = kernel_count == 1
                   ? 0.0
                   : duration * static_cast<double>(i) / (kernel_count - 1);
    layout.centers[i] = std::exp(-alpha_s * tau * t);
  }
  // width from the gap to the next center so the activation there is 0.5
  constexpr double kTwoLn2 = 2.0 * 0.6931471805599453;
  for (int i = 0; i + 1 < kernel_count; ++i) {
    double gap = layout.centers[i + 1] - layout.centers[i];
    layout.widths[i] = gap * gap / kTwoLn2;
  }
  layout.widths[kernel_count - 1] =
      kernel_count > 1 ? layout.widths[kernel_count - 2] : 1.0;
  return layout;
}

Eigen::VectorXd basis_activations(double phase, const KernelLayout& layout) {
  if (!(phase > 0.0) || phase > 1.0)
    throw std::invalid_argument("phase must lie in (0, 1]");
  Eigen::VectorXd act(layout.size());
  for (int i = 0; i < layout.size(); ++i) {
    double d = phase - layout.centers[i];
    act[i] = std::exp(-d * d / (2.0 * layout.widths[i]));
  }
  return act;
}

double forcing_term(double phase, const Eigen::VectorXd& theta, double goal,
                    double start, const KernelLayout& layout) {
  if (theta.size() != layout.size())
    throw std::invalid_argument("theta length must match the kernel count");
  Eigen::VectorXd act = basis_activations(phase, layout);
  double sum = act.sum();
  if (!(sum > 0.0))
    throw std::domain_error("all kernel activations underflowed to zero");
  return act.dot(theta) * phase / sum * (goal - start);
}

Eigen::VectorXd DmpSystem::stacked_parameters() const {
  Eigen::VectorXd stacked(parameter_count());
  for (int i = 0; i < dims(); ++i)
    stacked.segment(i * kernel_count(), kernel_count()) = theta.row(i).transpose();
  return stacked;
}

void DmpSystem::set_stacked_parameters(const Eigen::VectorXd& stacked) {
  if (stacked.size() != parameter_count())
    throw std::invalid_argument("stacked parameter vector has length " +
                                std::to_string(stacked.size()) + ", expected " +
                                std::to_string(parameter_count()));
  for (int i = 0; i < dims(); ++i)
    theta.row(i) = stacked.segment(i * kernel_count(), kernel_count()).transpose();
}

DmpSystem make_dmp_system(Eigen::VectorXd start, Eigen::VectorXd goal,
                          int kernel_count, const DmpGains& gains, double duration) {
  if (start.size() < 1) throw std::invalid_argument("system needs at least one dimension");
  if (start.size() != goal.size())
    throw std::invalid_argument("start and goal must have equal dimension");
  if (!(gains.alpha_z > 0.0) || !(gains.beta_z > 0.0) || !(gains.alpha_s > 0.0) ||
      !(gains.tau > 0.0))
    throw std::invalid_argument("all gains must be positive");
  DmpSystem sys;
  sys.start = std::move(start);
  sys.goal = std::move(goal);
  sys.gains = gains;
  sys.layout = default_kernel_layout(kernel_count, gains.alpha_s, gains.tau, duration);
  sys.theta = Eigen::MatrixXd::Zero(sys.dims(), kernel_count);
  return sys;
}

Trace rollout(const DmpSystem& sys, const IntegrationConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (sys.theta.rows() != sys.dims() || sys.theta.cols() != sys.kernel_count())
    throw std::invalid_argument("theta shape must be dims x kernel_count");
  if (!(sys.gains.alpha_z > 0.0) || !(sys.gains.beta_z > 0.0) ||
      !(sys.gains.alpha_s > 0.0) || !(sys.gains.tau > 0.0))
    throw std::invalid_argument("all gains must be positive");

  const int d = sys.dims();
  const double tau = sys.gains.tau;
  Eigen::VectorXd y = sys.start;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d);  // start at rest
  Eigen::MatrixXd states(cfg.steps + 1, d);
  states.row(0) = y.transpose();

  Eigen::VectorXd displacement = sys.goal - sys.start;
  for (int k = 0; k < cfg.steps; ++k) {
    // phase in closed form; only the transformation system is stepped
    double s = std::exp(-sys.gains.alpha_s * tau * (k * cfg.dt));
    Eigen::VectorXd act = basis_activations(s, sys.layout);
    double sum = act.sum();
    if (!(sum > 0.0))
      throw RolloutError("all kernel activations underflowed to zero", k);
    Eigen::VectorXd basis = act * (s / sum);

    for (int i = 0; i < d; ++i) {
      double f = basis.dot(sys.theta.row(i)) * displacement[i];
      double zdot = tau * (sys.gains.alpha_z *
                               (sys.gains.beta_z * (sys.goal[i] - y[i]) - z[i]) +
                           f);
      double ydot = tau * z[i];
      y[i] += cfg.dt * ydot;
      z[i] += cfg.dt * zdot;
    }
    if (!y.allFinite() || !z.allFinite())
      throw RolloutError("state became non-finite", k + 1);
    states.row(k + 1) = y.transpose();
  }
  return Trace(std::move(states), cfg.dt);
}

}  // namespace tlmp

#pragma once

#include "llb/integrator.hpp"

#include <Eigen/Dense>

#include <vector>

namespace llb {

/// Weak-form residuals of a recorded trajectory against every retained test
/// function phi = e_k (unit component vector):
///
///   <u(t), phi> - <u0, phi> + kappa1 int <grad u, grad phi>
///     + gamma int <u x grad u, grad phi> + kappa2 int <(1 + mu |u|^2) u, phi>
///
/// The spatial pairings use gradient quadrature (not the Galerkin maps) and
/// time integrals use the trapezoid rule over the recorded samples.
class WeakResidualTable {
 public:
  explicit WeakResidualTable(const Trajectory& trajectory);

  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  /// n x 3 residuals at sample i.
  [[nodiscard]] const Eigen::MatrixXd& at_sample(std::size_t i) const { return residuals_[i]; }
  /// Linear interpolation between samples; t must lie in [0, t_end].
  [[nodiscard]] double at(Eigen::Index mode, int component, double t) const;
  /// Max |residual| over all samples, the given leading modes and all components.
  [[nodiscard]] double max_abs(Eigen::Index leading_modes) const;

 private:
  std::vector<double> times_;
  std::vector<Eigen::MatrixXd> residuals_;
};

/// Residual for test mode `k` and component (0, 1 or 2) at time t.
double weak_residual(const Trajectory& trajectory, const ModeIndex& k, int component, double t);

/// Spatial integrand of the weak form at one state, for every test function:
/// kappa1 <grad u, grad e_k> + gamma <u x grad u, grad e_k> + kappa2 <F(u), e_k>.
Eigen::MatrixXd weak_integrand(const SpectralField& u, const ModelParams& params);

}  // namespace llb

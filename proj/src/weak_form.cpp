#include "llb/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace llb {

Eigen::MatrixXd weak_integrand(const SpectralField& u, const ModelParams& params) {
  const Basis& basis = u.basis();
  const Quadrature& quad = basis.quadrature();
  const Parity p = Parity::of(basis);
  const NodalMatrix<double> values = synthesize(basis, quad, u.coeffs());

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.size(), 3);
  for (int axis = 0; axis < basis.dim(); ++axis) {
    const NodalMatrix<double> grad = synthesize(basis, quad, u.coeffs(), axis);
    const Parity gp = p.flipped(axis);
    out += params.kappa1 * analyze(basis, quad, grad, gp, 1, axis);
    if (params.gamma != 0.0) {
      out += params.gamma * analyze(basis, quad, pointwise_cross(values, grad), p * gp, 2, axis);
    }
  }
  if (params.kappa2 != 0.0) {
    NodalMatrix<double> cubic = values;
    const Eigen::ArrayXd factor = 1.0 + params.mu * values.rowwise().squaredNorm().array();
    cubic.array().colwise() *= factor;
    out += params.kappa2 * analyze(basis, quad, cubic, p, 3);
  }
  return out;
}

WeakResidualTable::WeakResidualTable(const Trajectory& trajectory) {
  trajectory.validate();
  times_ = trajectory.times;
  const Eigen::MatrixXd& c0 = trajectory.states.front().coeffs();
  Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(c0.rows(), 3);
  Eigen::MatrixXd previous = weak_integrand(trajectory.states.front(), trajectory.params);
  residuals_.reserve(times_.size());
  residuals_.push_back(Eigen::MatrixXd::Zero(c0.rows(), 3));
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const Eigen::MatrixXd current = weak_integrand(trajectory.states[i], trajectory.params);
    integral += 0.5 * (times_[i] - times_[i - 1]) * (previous + current);
    residuals_.push_back(trajectory.states[i].coeffs() - c0 + integral);
    previous = current;
  }
}

double WeakResidualTable::at(Eigen::Index mode, int component, double t) const {
  const double t_end = times_.back();
  const double eps = 1e-12 * std::max(1.0, t_end);
  if (t < -eps || t > t_end + eps) {
    throw ConfigError("weak_residual: t = " + std::to_string(t) + " outside [0, " +
                      std::to_string(t_end) + "]");
  }
  if (component < 0 || component > 2) throw ConfigError("weak_residual: component must be 0..2");
  if (mode < 0 || mode >= residuals_.front().rows()) {
    throw ConfigError("weak_residual: test mode not retained by the basis");
  }
  t = std::clamp(t, 0.0, t_end);
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin());
  if (i < times_.size() && std::abs(times_[i] - t) <= eps) return residuals_[i](mode, component);
  const std::size_t lo = i - 1;
  const double s = (t - times_[lo]) / (times_[i] - times_[lo]);
  return (1.0 - s) * residuals_[lo](mode, component) + s * residuals_[i](mode, component);
}

double WeakResidualTable::max_abs(Eigen::Index leading_modes) const {
  double worst = 0.0;
  const Eigen::Index n = std::min<Eigen::Index>(leading_modes, residuals_.front().rows());
  for (const Eigen::MatrixXd& r : residuals_) {
    worst = std::max(worst, r.topRows(n).cwiseAbs().maxCoeff());
  }
  return worst;
}

double weak_residual(const Trajectory& trajectory, const ModeIndex& k, int component, double t) {
  const auto m = trajectory.basis().find(k);
  if (!m) throw ConfigError("weak_residual: test mode not retained by the basis");
  return WeakResidualTable(trajectory).at(*m, component, t);
}

}  // namespace llb

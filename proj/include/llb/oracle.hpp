#pragma once

#include "llb/field.hpp"
#include "llb/operators.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

/// Reference solutions and slow, independent evaluation paths used to check
/// the spectral transforms and the time integrator. Nothing here goes through
/// the Quadrature transform matrices.
namespace llb::oracle {

using Point = std::array<double, 3>;
using VectorFunction = std::function<Eigen::Vector3d(const Point&)>;

/// |u(t)| for spatially constant data: r' = -kappa2 r (1 + mu r^2), i.e.
/// r(t)^2 = r0^2 e^{-2 kappa2 t} / (1 + mu r0^2 (1 - e^{-2 kappa2 t})).
double constant_field_exact(double r0, const ModelParams& params, double t);

/// The same scalar ODE integrated with classical RK4 at `steps` steps; an
/// independent check on the closed form.
double constant_field_reference(double r0, const ModelParams& params, double t, int steps = 20000);

/// amplitude e^{-(kappa1 lambda_k + kappa2) t}; requires mu = 0.
double single_mode_exact(const Basis& basis, const ModeIndex& mode, double amplitude,
                         const ModelParams& params, double t);

struct AnalyticCase {
  enum class Kind { constant_bernoulli, single_mode_linear };

  Kind kind = Kind::constant_bernoulli;
  ModelParams params;
  double r0 = 0.0;
  ModeIndex mode;
  double amplitude = 0.0;
  double lambda = 0.0;

  static AnalyticCase constant_bernoulli(double r0, const ModelParams& params);
  static AnalyticCase single_mode_linear(const Basis& basis, const ModeIndex& mode,
                                         double amplitude, const ModelParams& params);
  void validate() const;
  [[nodiscard]] double evaluate(double t) const;
};

/// Product of closed-form 1-D eigenfunctions at x.
double basis_function(const Basis& basis, const ModeIndex& mode, const Point& x);
/// -(Lap e_k)(x) = lambda_k e_k(x), evaluated from the 1-D second derivatives.
double basis_function_neg_laplacian(const Basis& basis, const ModeIndex& mode, const Point& x);

/// sum_k c_k e_k(x) by direct summation.
Eigen::Vector3d direct_value(const SpectralField& u, const Point& x);
/// sum_k c_k (Lap e_k)(x) by direct summation.
Eigen::Vector3d direct_laplacian_value(const SpectralField& u, const Point& x);

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre recurrence).
void gauss_legendre(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct PointSet {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Tensor composite Gauss-Legendre rule with `panels` panels per axis.
PointSet composite_gauss(const DomainSpec& domain, const Extents& panels, int order = 8);

/// <f, e_k> for every retained mode by composite Gauss quadrature with
/// `resolution` times as many panels per axis as the basis grid has points.
SpectralField dense_project(const VectorFunction& f, const BasisPtr& basis, int resolution = 4);

/// Pi_n (u x Lap u) and Pi_n ((1 + mu |u|^2) u) through dense_project.
SpectralField dense_cross_laplacian(const SpectralField& u, int resolution = 4);
SpectralField dense_cubic_term(const SpectralField& u, const ModelParams& params,
                               int resolution = 4);

/// Cell-centred finite-difference solution of the same equation.
struct FdTrajectory {
  DomainSpec domain;
  Extents cells{1, 1, 1};
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> states;  // cells x 3, first axis fastest

  [[nodiscard]] double cell_volume() const;
  [[nodiscard]] Eigen::Index size() const;
};

/// Second-order Laplacian (ghost reflection for Neumann, odd reflection for
/// Dirichlet), pointwise nonlinearities, implicit (kappa1 Lap_h - kappa2) and
/// explicit cross and cubic terms. Records every `record_every` steps and the
/// final state.
FdTrajectory fd_reference(const VectorFunction& u0, const DomainSpec& domain,
                          const ModelParams& params, const Extents& cells, double dt,
                          double t_end, int record_every = 1);

/// Same, starting from a spectral field sampled at the cell centres.
FdTrajectory fd_reference(const SpectralField& u0, const ModelParams& params, const Extents& cells,
                          double dt, double t_end, int record_every = 1);

/// Midpoint-rule L2 distance between a spectral field and recorded FD sample.
double l2_distance(const SpectralField& u, const FdTrajectory& fd, std::size_t sample);

}  // namespace llb::oracle

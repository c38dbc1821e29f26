#include "llb/oracle.hpp"

#include "llb/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <string>

namespace llb::oracle {

double constant_field_exact(double r0, const ModelParams& params, double t) {
  if (t < 0.0) throw ConfigError("constant_field_exact: t must be nonnegative");
  if (r0 == 0.0) return 0.0;
  const double decay = std::exp(-2.0 * params.kappa2 * t);
  const double s0 = r0 * r0;
  const double s = s0 * decay / (1.0 + params.mu * s0 * (1.0 - decay));
  return std::sqrt(s);
}

double constant_field_reference(double r0, const ModelParams& params, double t, int steps) {
  if (steps < 1) throw ConfigError("constant_field_reference: steps must be >= 1");
  const auto f = [&](double r) { return -params.kappa2 * r * (1.0 + params.mu * r * r); };
  const double h = t / steps;
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(r);
    const double k2 = f(r + 0.5 * h * k1);
    const double k3 = f(r + 0.5 * h * k2);
    const double k4 = f(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

double single_mode_exact(const Basis& basis, const ModeIndex& mode, double amplitude,
                         const ModelParams& params, double t) {
  if (params.mu != 0.0) throw ConfigError("single_mode_exact: requires mu = 0");
  if (!basis.find(mode)) throw ConfigError("single_mode_exact: mode not in basis");
  const double lambda = eigenvalue_of(basis.domain(), mode);
  return amplitude * std::exp(-(params.kappa1 * lambda + params.kappa2) * t);
}

AnalyticCase AnalyticCase::constant_bernoulli(double r0, const ModelParams& params) {
  AnalyticCase c;
  c.kind = Kind::constant_bernoulli;
  c.params = params;
  c.r0 = r0;
  c.validate();
  return c;
}

AnalyticCase AnalyticCase::single_mode_linear(const Basis& basis, const ModeIndex& mode,
                                              double amplitude, const ModelParams& params) {
  AnalyticCase c;
  c.kind = Kind::single_mode_linear;
  c.params = params;
  c.mode = mode;
  c.amplitude = amplitude;
  if (!basis.find(mode)) throw ConfigError("single_mode_linear: mode not in basis");
  c.lambda = eigenvalue_of(basis.domain(), mode);
  c.validate();
  return c;
}

void AnalyticCase::validate() const {
  if (kind == Kind::constant_bernoulli) {
    if (r0 < 0.0) throw ConfigError("constant_bernoulli: r0 must be nonnegative");
    if (params.kappa2 < 0.0) throw ConfigError("constant_bernoulli: kappa2 must be >= 0");
  } else if (params.mu != 0.0) {
    throw ConfigError("single_mode_linear: requires mu = 0");
  }
}

double AnalyticCase::evaluate(double t) const {
  if (kind == Kind::constant_bernoulli) return constant_field_exact(r0, params, t);
  return amplitude * std::exp(-(params.kappa1 * lambda + params.kappa2) * t);
}

namespace {

double one_dim(Family fam, int k, double length, double x) {
  const double arg = k * std::numbers::pi * x / length;
  const double norm = (fam == Family::cosine && k == 0) ? 1.0 / std::sqrt(length)
                                                         : std::sqrt(2.0 / length);
  return fam == Family::cosine ? norm * std::cos(arg) : norm * std::sin(arg);
}

}  // namespace

double basis_function(const Basis& basis, const ModeIndex& mode, const Point& x) {
  double v = 1.0;
  for (int j = 0; j < basis.dim(); ++j) {
    v *= one_dim(basis.family(), mode.k[j], basis.domain().lengths[j], x[j]);
  }
  return v;
}

double basis_function_neg_laplacian(const Basis& basis, const ModeIndex& mode, const Point& x) {
  // Sum over axes of -(d^2/dx_j^2) applied to the tensor product.
  double total = 0.0;
  for (int a = 0; a < basis.dim(); ++a) {
    double term = 1.0;
    for (int j = 0; j < basis.dim(); ++j) {
      const double length = basis.domain().lengths[j];
      double f = one_dim(basis.family(), mode.k[j], length, x[j]);
      if (j == a) {
        const double w = mode.k[j] * std::numbers::pi / length;
        f *= w * w;
      }
      term *= f;
    }
    total += term;
  }
  return total;
}

Eigen::Vector3d direct_value(const SpectralField& u, const Point& x) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (Eigen::Index m = 0; m < u.modes(); ++m) {
    v += basis_function(u.basis(), u.basis().mode(m), x) * u.coeffs().row(m).transpose();
  }
  return v;
}

Eigen::Vector3d direct_laplacian_value(const SpectralField& u, const Point& x) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (Eigen::Index m = 0; m < u.modes(); ++m) {
    v -= basis_function_neg_laplacian(u.basis(), u.basis().mode(m), x) *
         u.coeffs().row(m).transpose();
  }
  return v;
}

void gauss_legendre(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (order < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  // P_order(x) and its derivative by the three-term recurrence.
  const auto legendre = [order](double x, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
  };
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double p = 0.0;
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, p, dp);
    nodes(i) = x;
    weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

PointSet composite_gauss(const DomainSpec& domain, const Extents& panels, int order) {
  domain.validate();
  Eigen::VectorXd gx;
  Eigen::VectorXd gw;
  gauss_legendre(order, gx, gw);
  std::array<std::vector<double>, 3> x;
  std::array<std::vector<double>, 3> w;
  for (int j = 0; j < 3; ++j) {
    if (j >= domain.dim) {
      x[j] = {0.0};
      w[j] = {1.0};
      continue;
    }
    if (panels[j] < 1) throw ConfigError("composite_gauss: panels must be >= 1");
    const double h = domain.lengths[j] / panels[j];
    for (int p = 0; p < panels[j]; ++p) {
      for (int i = 0; i < order; ++i) {
        x[j].push_back((p + 0.5) * h + 0.5 * h * gx(i));
        w[j].push_back(0.5 * h * gw(i));
      }
    }
  }
  PointSet set;
  set.points.reserve(x[0].size() * x[1].size() * x[2].size());
  for (std::size_t c = 0; c < x[2].size(); ++c) {
    for (std::size_t b = 0; b < x[1].size(); ++b) {
      for (std::size_t a = 0; a < x[0].size(); ++a) {
        set.points.push_back({x[0][a], x[1][b], x[2][c]});
        set.weights.push_back(w[0][a] * w[1][b] * w[2][c]);
      }
    }
  }
  return set;
}

SpectralField dense_project(const VectorFunction& f, const BasisPtr& basis, int resolution) {
  if (resolution < 1) throw ConfigError("dense_project: resolution must be >= 1");
  Extents panels{1, 1, 1};
  for (int j = 0; j < basis->dim(); ++j) {
    panels[j] = resolution * basis->quadrature().points()[j];
  }
  const PointSet grid = composite_gauss(basis->domain(), panels);
  SpectralField out(basis);
  for (std::size_t q = 0; q < grid.points.size(); ++q) {
    const Eigen::Vector3d fx = f(grid.points[q]);
    if (fx.isZero(0.0)) continue;
    for (Eigen::Index m = 0; m < basis->size(); ++m) {
      const double e = basis_function(*basis, basis->mode(m), grid.points[q]);
      out.coeffs().row(m) += grid.weights[q] * e * fx.transpose();
    }
  }
  return out;
}

SpectralField dense_cross_laplacian(const SpectralField& u, int resolution) {
  return dense_project(
      [&u](const Point& x) {
        const Eigen::Vector3d a = direct_value(u, x);
        const Eigen::Vector3d b = direct_laplacian_value(u, x);
        return Eigen::Vector3d(a.cross(b));
      },
      u.basis_ptr(), resolution);
}

SpectralField dense_cubic_term(const SpectralField& u, const ModelParams& params, int resolution) {
  return dense_project(
      [&](const Point& x) {
        const Eigen::Vector3d a = direct_value(u, x);
        return Eigen::Vector3d((1.0 + params.mu * a.squaredNorm()) * a);
      },
      u.basis_ptr(), resolution);
}

double FdTrajectory::cell_volume() const {
  double v = 1.0;
  for (int j = 0; j < domain.dim; ++j) v *= domain.lengths[j] / cells[j];
  return v;
}

Eigen::Index FdTrajectory::size() const {
  return static_cast<Eigen::Index>(cells[0]) * cells[1] * cells[2];
}

double l2_distance(const SpectralField& u, const FdTrajectory& fd, std::size_t sample) {
  if (sample >= fd.states.size()) throw ConfigError("l2_distance: sample out of range");
  const Eigen::MatrixXd& nodal = fd.states[sample];
  std::array<double, 3> h{1.0, 1.0, 1.0};
  for (int j = 0; j < fd.domain.dim; ++j) h[j] = fd.domain.lengths[j] / fd.cells[j];
  double s = 0.0;
  Eigen::Index row = 0;
  for (int k = 0; k < fd.cells[2]; ++k) {
    for (int j = 0; j < fd.cells[1]; ++j) {
      for (int i = 0; i < fd.cells[0]; ++i, ++row) {
        const Point x{(i + 0.5) * h[0], (j + 0.5) * h[1], (k + 0.5) * h[2]};
        s += (direct_value(u, x) - nodal.row(row).transpose()).squaredNorm();
      }
    }
  }
  return std::sqrt(s * fd.cell_volume());
}

namespace {

Eigen::SparseMatrix<double> fd_laplacian(const DomainSpec& domain, const Extents& cells) {
  const Eigen::Index n = static_cast<Eigen::Index>(cells[0]) * cells[1] * cells[2];
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * (1 + 2 * domain.dim));
  const std::array<Eigen::Index, 3> stride{1, cells[0], static_cast<Eigen::Index>(cells[0]) * cells[1]};
  const double ghost = domain.bc == Boundary::neumann ? 1.0 : -1.0;
  for (Eigen::Index flat = 0; flat < n; ++flat) {
    std::array<int, 3> idx{static_cast<int>(flat % cells[0]),
                           static_cast<int>((flat / cells[0]) % cells[1]),
                           static_cast<int>(flat / (static_cast<Eigen::Index>(cells[0]) * cells[1]))};
    double diag = 0.0;
    for (int j = 0; j < domain.dim; ++j) {
      const double h = domain.lengths[j] / cells[j];
      const double c = 1.0 / (h * h);
      diag -= 2.0 * c;
      if (idx[j] > 0) {
        entries.emplace_back(flat, flat - stride[j], c);
      } else {
        diag += ghost * c;
      }
      if (idx[j] + 1 < cells[j]) {
        entries.emplace_back(flat, flat + stride[j], c);
      } else {
        diag += ghost * c;
      }
    }
    entries.emplace_back(flat, flat, diag);
  }
  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(entries.begin(), entries.end());
  return lap;
}

Eigen::MatrixXd cross_rows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), 3);
  out.col(0) = a.col(1).cwiseProduct(b.col(2)) - a.col(2).cwiseProduct(b.col(1));
  out.col(1) = a.col(2).cwiseProduct(b.col(0)) - a.col(0).cwiseProduct(b.col(2));
  out.col(2) = a.col(0).cwiseProduct(b.col(1)) - a.col(1).cwiseProduct(b.col(0));
  return out;
}

FdTrajectory fd_run(Eigen::MatrixXd u, const DomainSpec& domain, const ModelParams& params,
                    const Extents& cells, double dt, double t_end, int record_every) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("fd_reference: dt and t_end must be > 0");
  if (record_every < 1) throw ConfigError("fd_reference: record_every must be >= 1");
  const double ratio = t_end / dt;
  const auto steps = static_cast<long>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw ConfigError("fd_reference: t_end must be an integer multiple of dt");
  }
  const Eigen::SparseMatrix<double> lap = fd_laplacian(domain, cells);

  double lambda_h = 0.0;
  for (int j = 0; j < domain.dim; ++j) {
    const double h = domain.lengths[j] / cells[j];
    lambda_h += 4.0 / (h * h);
  }
  const double umax = u.rowwise().norm().maxCoeff();
  if (params.gamma * umax > params.kappa1 && dt * params.gamma * umax * lambda_h > 1.0) {
    throw ConfigError("fd_reference: explicit cross term violates the stability guard");
  }
  if (dt * params.kappa2 * params.mu * umax * umax > 1.0) {
    throw ConfigError("fd_reference: explicit cubic term violates the stability guard");
  }

  Eigen::SparseMatrix<double> system(lap.rows(), lap.cols());
  system.setIdentity();
  system *= 1.0 + dt * params.kappa2;
  system -= dt * params.kappa1 * lap;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success) throw NumericalError("fd_reference: factorization failed");

  FdTrajectory out;
  out.domain = domain;
  out.cells = cells;
  out.times.push_back(0.0);
  out.states.push_back(u);
  for (long m = 1; m <= steps; ++m) {
    Eigen::MatrixXd rhs = u;
    if (params.gamma != 0.0) rhs += dt * params.gamma * cross_rows(u, lap * u);
    if (params.kappa2 != 0.0 && params.mu != 0.0) {
      const Eigen::ArrayXd mag2 = u.rowwise().squaredNorm().array();
      Eigen::MatrixXd cubic = u;
      cubic.array().colwise() *= mag2;
      rhs -= dt * params.kappa2 * params.mu * cubic;
    }
    for (int c = 0; c < 3; ++c) u.col(c) = solver.solve(rhs.col(c));
    if (!u.allFinite()) {
      throw NumericalError("fd_reference: non-finite state at step " + std::to_string(m));
    }
    if (m % record_every == 0 || m == steps) {
      out.times.push_back(m == steps ? t_end : static_cast<double>(m) * dt);
      out.states.push_back(u);
    }
  }
  return out;
}

}  // namespace

FdTrajectory fd_reference(const VectorFunction& u0, const DomainSpec& domain,
                          const ModelParams& params, const Extents& cells, double dt,
                          double t_end, int record_every) {
  domain.validate();
  Extents c{1, 1, 1};
  for (int j = 0; j < domain.dim; ++j) {
    if (cells[j] < 2) throw ConfigError("fd_reference: need at least two cells per axis");
    c[j] = cells[j];
  }
  const Eigen::Index n = static_cast<Eigen::Index>(c[0]) * c[1] * c[2];
  Eigen::MatrixXd u(n, 3);
  for (Eigen::Index flat = 0; flat < n; ++flat) {
    const std::array<Eigen::Index, 3> idx{flat % c[0], (flat / c[0]) % c[1],
                                          flat / (static_cast<Eigen::Index>(c[0]) * c[1])};
    Point x{0.0, 0.0, 0.0};
    for (int j = 0; j < domain.dim; ++j) x[j] = (idx[j] + 0.5) * domain.lengths[j] / c[j];
    u.row(flat) = u0(x).transpose();
  }
  return fd_run(std::move(u), domain, params, c, dt, t_end, record_every);
}

FdTrajectory fd_reference(const SpectralField& u0, const ModelParams& params, const Extents& cells,
                          double dt, double t_end, int record_every) {
  return fd_reference([&u0](const Point& x) { return direct_value(u0, x); }, u0.basis().domain(),
                      params, cells, dt, t_end, record_every);
}

}  // namespace llb::oracle

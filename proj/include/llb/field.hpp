#pragma once

#include "llb/basis.hpp"
#include "llb/errors.hpp"
#include "llb/transform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

namespace llb {

/// A 3-vector field in span{e_1, ..., e_n}: n x 3 coefficients on a shared basis.
template <typename Scalar>
class BasicSpectralField {
 public:
  using scalar_type = Scalar;
  using Coeffs = CoeffMatrix<Scalar>;

  explicit BasicSpectralField(BasisPtr basis) : basis_(std::move(basis)) {
    if (!basis_) throw ShapeError("field needs a basis");
    coeffs_ = Coeffs::Zero(basis_->size(), 3);
  }

  BasicSpectralField(BasisPtr basis, Coeffs coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (!basis_) throw ShapeError("field needs a basis");
    if (coeffs_.rows() != basis_->size()) {
      throw ShapeError("field: " + std::to_string(coeffs_.rows()) + " coefficient rows for a " +
                       std::to_string(basis_->size()) + "-mode basis");
    }
  }

  [[nodiscard]] const Basis& basis() const { return *basis_; }
  [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
  [[nodiscard]] const Coeffs& coeffs() const { return coeffs_; }
  [[nodiscard]] Coeffs& coeffs() { return coeffs_; }
  [[nodiscard]] Eigen::Index modes() const { return coeffs_.rows(); }
  [[nodiscard]] bool all_finite() const { return coeffs_.allFinite(); }

  [[nodiscard]] NodalMatrix<Scalar> nodal() const { return synthesize(*basis_, coeffs_); }
  [[nodiscard]] NodalMatrix<Scalar> nodal(const Quadrature& quad, int derivative_axis = -1) const {
    return synthesize(*basis_, quad, coeffs_, derivative_axis);
  }

  template <typename Other>
  [[nodiscard]] BasicSpectralField<Other> cast() const {
    return BasicSpectralField<Other>(basis_, coeffs_.template cast<Other>());
  }

  BasicSpectralField& operator+=(const BasicSpectralField& other) {
    require_same_basis(other, "+=");
    coeffs_ += other.coeffs_;
    return *this;
  }
  BasicSpectralField& operator-=(const BasicSpectralField& other) {
    require_same_basis(other, "-=");
    coeffs_ -= other.coeffs_;
    return *this;
  }
  BasicSpectralField& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  friend BasicSpectralField operator+(BasicSpectralField a, const BasicSpectralField& b) {
    return a += b;
  }
  friend BasicSpectralField operator-(BasicSpectralField a, const BasicSpectralField& b) {
    return a -= b;
  }
  friend BasicSpectralField operator*(Scalar s, BasicSpectralField a) { return a *= s; }
  friend BasicSpectralField operator*(BasicSpectralField a, Scalar s) { return a *= s; }

  void require_same_basis(const BasicSpectralField& other, const char* what) const {
    if (!basis_->same_as(*other.basis_)) {
      throw ShapeError(std::string("field ") + what + ": operands live on different bases");
    }
  }

 private:
  BasisPtr basis_;
  Coeffs coeffs_;
};

using SpectralField = BasicSpectralField<double>;

struct NormKind {
  enum class Kind { l2, h1_semi, h1, l4, l6, l3_2, x_beta, x_neg_beta };
  Kind kind = Kind::l2;
  double beta = 0.0;

  static NormKind l2() { return {Kind::l2, 0.0}; }
  static NormKind h1_semi() { return {Kind::h1_semi, 0.0}; }
  static NormKind h1() { return {Kind::h1, 0.0}; }
  static NormKind l4() { return {Kind::l4, 0.0}; }
  static NormKind l6() { return {Kind::l6, 0.0}; }
  static NormKind l3_2() { return {Kind::l3_2, 0.0}; }
  static NormKind x_beta(double b) { return {Kind::x_beta, b}; }
  static NormKind x_neg_beta(double b) { return {Kind::x_neg_beta, b}; }
};

/// Controls grid refinement for non-polynomial integrands (|u|^{3/2}).
struct LpOptions {
  double rel_tol = 1e-10;
  Eigen::Index max_points = Eigen::Index{1} << 22;
};

/// Evaluates a nodal vector field on a given quadrature grid.
template <typename Scalar>
using NodalEvaluator = std::function<NodalMatrix<Scalar>(const Quadrature&)>;

/// (integral over the box of |f(x)|^p)^{1/p} for the Euclidean magnitude of a
/// nodal 3-vector function f. `factors` is the polynomial degree of f in basis
/// functions; for even integer p the grid is chosen so that the integral is
/// exact. Otherwise the grid is doubled until two successive values agree.
template <typename Scalar>
Scalar lp_norm_of(const Basis& basis, const NodalEvaluator<Scalar>& f, double p, int factors,
                  const LpOptions& options = {}) {
  using std::pow;
  using std::sqrt;
  const auto integrate = [&](const Quadrature& quad) {
    const NodalMatrix<Scalar> v = f(quad);
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> mag2 = v.rowwise().squaredNorm().array();
    if (p == 2.0) return quadrature_sum(quad, mag2.matrix());
    if (p == 4.0) return quadrature_sum(quad, mag2.square().matrix());
    if (p == 6.0) return quadrature_sum(quad, (mag2.square() * mag2).matrix());
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> mag =
        mag2.sqrt().pow(static_cast<Scalar>(p));
    return quadrature_sum(quad, mag.matrix());
  };
  const auto checked = [&](const Quadrature& quad) {
    const Scalar value = integrate(quad);
    if (!std::isfinite(static_cast<double>(value))) {
      throw NumericalError("lp_norm: integral of |u|^" + std::to_string(p) + " is not finite");
    }
    return value;
  };
  const bool even = p == 2.0 || p == 4.0 || p == 6.0;
  if (even) {
    const int degree = static_cast<int>(p) * factors;
    const auto quad = basis.exact_quadrature(degree);
    const Scalar value = checked(*quad);
    return pow(std::max(value, Scalar(0)), static_cast<Scalar>(1.0 / p));
  }
  if (!(p > 0.0)) throw QuadratureError("lp_norm: exponent must be positive");
  auto quad = basis.exact_quadrature(2 * factors);
  Scalar previous = checked(*quad);
  while (true) {
    Extents points = quad->points();
    Eigen::Index total = 1;
    for (int j = 0; j < basis.dim(); ++j) {
      points[j] *= 2;
      total *= points[j];
    }
    if (total > options.max_points) {
      throw QuadratureError("lp_norm: |u|^" + std::to_string(p) +
                            " not resolved within the point budget");
    }
    quad = basis.make_quadrature(points);
    const Scalar current = checked(*quad);
    const Scalar scale = std::max(std::abs(current), std::numeric_limits<Scalar>::min());
    if (std::abs(current - previous) <= static_cast<Scalar>(options.rel_tol) * scale ||
        current == Scalar(0)) {
      return pow(current, static_cast<Scalar>(1.0 / p));
    }
    previous = current;
  }
}

template <typename Scalar>
void require_finite(const BasicSpectralField<Scalar>& u, const char* what) {
  if (!u.all_finite()) throw NumericalError(std::string(what) + ": non-finite coefficients");
}

/// Sum of lambda_k^power * |c_k|^2 over modes and components.
template <typename Scalar>
Scalar weighted_square_sum(const BasicSpectralField<Scalar>& u, double power) {
  const Eigen::VectorXd& lambda = u.basis().eigenvalues();
  Scalar sum(0);
  for (Eigen::Index k = 0; k < u.modes(); ++k) {
    const Scalar w = power == 0.0 ? Scalar(1) : static_cast<Scalar>(std::pow(lambda(k), power));
    sum += w * u.coeffs().row(k).squaredNorm();
  }
  return sum;
}

template <typename Scalar>
Scalar norm(const BasicSpectralField<Scalar>& u, const NormKind& kind,
            const LpOptions& options = {}) {
  using std::sqrt;
  require_finite(u, "norm");
  const Eigen::VectorXd& lambda = u.basis().eigenvalues();
  const auto graph = [&](double exponent) {
    Scalar sum(0);
    for (Eigen::Index k = 0; k < u.modes(); ++k) {
      sum += static_cast<Scalar>(std::pow(1.0 + lambda(k), 2.0 * exponent)) *
             u.coeffs().row(k).squaredNorm();
    }
    return sqrt(sum);
  };
  const NodalEvaluator<Scalar> values = [&u](const Quadrature& q) { return u.nodal(q); };
  switch (kind.kind) {
    case NormKind::Kind::l2:
      return u.coeffs().norm();
    case NormKind::Kind::h1_semi:
      return sqrt(weighted_square_sum(u, 1.0));
    case NormKind::Kind::h1:
      return sqrt(u.coeffs().squaredNorm() + weighted_square_sum(u, 1.0));
    case NormKind::Kind::l4:
      return lp_norm_of(u.basis(), values, 4.0, 1, options);
    case NormKind::Kind::l6:
      return lp_norm_of(u.basis(), values, 6.0, 1, options);
    case NormKind::Kind::l3_2:
      return lp_norm_of(u.basis(), values, 1.5, 1, options);
    case NormKind::Kind::x_beta:
      if (!std::isfinite(kind.beta)) throw ConfigError("norm: beta must be finite");
      return graph(kind.beta);
    case NormKind::Kind::x_neg_beta:
      if (!std::isfinite(kind.beta) || !(kind.beta > 0.0)) {
        throw ConfigError("norm: X^{-beta} needs beta > 0");
      }
      return graph(-kind.beta);
  }
  return Scalar(0);
}

/// L2 inner product; by orthonormality the coefficient dot product.
template <typename Scalar>
Scalar inner(const BasicSpectralField<Scalar>& u, const BasicSpectralField<Scalar>& v) {
  u.require_same_basis(v, "inner");
  return (u.coeffs().array() * v.coeffs().array()).sum();
}

/// Zero-pads `u` into a basis that contains all of its modes.
template <typename Scalar>
BasicSpectralField<Scalar> embed(const BasicSpectralField<Scalar>& u, const BasisPtr& target) {
  if (!u.basis().nested_in(*target)) {
    throw ShapeError("embed: source basis is not nested in the target basis");
  }
  BasicSpectralField<Scalar> out(target);
  for (Eigen::Index m = 0; m < u.modes(); ++m) {
    const auto idx = target->find(u.basis().mode(m));
    out.coeffs().row(*idx) = u.coeffs().row(m);
  }
  return out;
}

/// Keeps the coefficients of the modes retained by `target` (the L2 projection
/// onto the smaller span).
template <typename Scalar>
BasicSpectralField<Scalar> restrict_to(const BasicSpectralField<Scalar>& u,
                                       const BasisPtr& target) {
  if (!target->nested_in(u.basis())) {
    throw ShapeError("restrict_to: target basis is not nested in the source basis");
  }
  BasicSpectralField<Scalar> out(target);
  for (Eigen::Index m = 0; m < target->size(); ++m) {
    const auto idx = u.basis().find(target->mode(m));
    out.coeffs().row(m) = u.coeffs().row(*idx);
  }
  return out;
}

/// Pi_n on mode-ordered coefficients: zero every mode from position `n` on.
template <typename Scalar>
BasicSpectralField<Scalar> truncate_modes(const BasicSpectralField<Scalar>& u, Eigen::Index n) {
  if (n < 0 || n > u.modes()) throw ShapeError("truncate_modes: n out of range");
  BasicSpectralField<Scalar> out = u;
  out.coeffs().bottomRows(u.modes() - n).setZero();
  return out;
}

}  // namespace llb

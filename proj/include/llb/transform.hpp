#pragma once

#include "llb/basis.hpp"
#include "llb/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace llb {

/// Mode-ordered coefficients, one column per vector component.
template <typename Scalar>
using CoeffMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

/// Samples on a quadrature grid (flat node index, first axis fastest).
template <typename Scalar>
using NodalMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

/// Per-axis trigonometric parity of a nodal function: bit j set when the
/// function is a sine series along axis j.
struct Parity {
  unsigned bits = 0;

  static Parity of(const Basis& basis) {
    return Parity{basis.family() == Family::sine ? ((1u << basis.dim()) - 1u) : 0u};
  }
  [[nodiscard]] bool sine(int axis) const { return (bits >> axis) & 1u; }
  [[nodiscard]] Parity flipped(int axis) const { return Parity{bits ^ (1u << axis)}; }
  friend Parity operator*(Parity a, Parity b) { return Parity{a.bits ^ b.bits}; }
  friend bool operator==(Parity, Parity) = default;
};

namespace detail {

// Applies `op` (rows: output length, cols: input length) along one axis of a
// column-major tensor with extents `shape` (3 spatial axes + component).
template <typename Scalar>
void apply_axis(const std::vector<Scalar>& in, std::vector<Scalar>& out,
                std::array<Eigen::Index, 4>& shape, int axis, const Eigen::MatrixXd& op) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::Index pre = 1;
  for (int a = 0; a < axis; ++a) pre *= shape[a];
  Eigen::Index post = 1;
  for (int a = axis + 1; a < 4; ++a) post *= shape[a];
  const Eigen::Index n_in = shape[axis];
  const Eigen::Index n_out = op.rows();
  out.assign(static_cast<std::size_t>(pre * n_out * post), Scalar(0));
  const Mat opt = op.transpose().template cast<Scalar>();
  for (Eigen::Index p = 0; p < post; ++p) {
    Eigen::Map<const Mat> src(in.data() + p * pre * n_in, pre, n_in);
    Eigen::Map<Mat> dst(out.data() + p * pre * n_out, pre, n_out);
    dst.noalias() = src * opt;
  }
  shape[axis] = n_out;
}

inline std::string parity_message(const char* what) {
  return std::string(what) + ": quadrature grid does not resolve the integrand exactly";
}

}  // namespace detail

/// Evaluates sum_k c_k e_k (or its partial derivative along `derivative_axis`)
/// at every node of `quad`.
template <typename Derived>
NodalMatrix<typename Derived::Scalar> synthesize(const Basis& basis, const Quadrature& quad,
                                                 const Eigen::MatrixBase<Derived>& coeffs,
                                                 int derivative_axis = -1) {
  using Scalar = typename Derived::Scalar;
  if (coeffs.rows() != basis.size() || coeffs.cols() != 3) {
    throw ShapeError("synthesize: coefficient matrix must be " + std::to_string(basis.size()) +
                     " x 3");
  }
  if (quad.modes() != basis.modes_per_dim() || quad.dim() != basis.dim()) {
    throw ShapeError("synthesize: quadrature was built for a different basis");
  }
  const Extents& n = basis.modes_per_dim();
  std::array<Eigen::Index, 4> shape{n[0], n[1], n[2], 3};
  const Eigen::Index nt = static_cast<Eigen::Index>(n[0]) * n[1] * n[2];
  std::vector<Scalar> a(static_cast<std::size_t>(nt * 3), Scalar(0));
  for (Eigen::Index m = 0; m < basis.size(); ++m) {
    const Eigen::Index off = basis.tensor_offset(m);
    for (int c = 0; c < 3; ++c) a[static_cast<std::size_t>(off + c * nt)] = coeffs(m, c);
  }
  std::vector<Scalar> b;
  for (int axis = 0; axis < basis.dim(); ++axis) {
    detail::apply_axis(a, b, shape, axis, quad.synthesis(axis, axis == derivative_axis));
    a.swap(b);
  }
  NodalMatrix<Scalar> nodal(quad.size(), 3);
  for (int c = 0; c < 3; ++c) {
    for (Eigen::Index q = 0; q < quad.size(); ++q) {
      nodal(q, c) = a[static_cast<std::size_t>(q + c * quad.size())];
    }
  }
  return nodal;
}

template <typename Derived>
NodalMatrix<typename Derived::Scalar> synthesize(const Basis& basis,
                                                 const Eigen::MatrixBase<Derived>& coeffs,
                                                 int derivative_axis = -1) {
  return synthesize(basis, basis.quadrature(), coeffs, derivative_axis);
}

/// L2 pairings <f, e_k> (or <f, d e_k / dx_axis> when `derivative_test_axis`
/// is set) of nodal samples. `factors` is the number of basis functions whose
/// product makes up f; exactness of the quadrature for that degree is checked.
template <typename Derived>
CoeffMatrix<typename Derived::Scalar> analyze(const Basis& basis, const Quadrature& quad,
                                              const Eigen::MatrixBase<Derived>& nodal,
                                              Parity parity, int factors,
                                              int derivative_test_axis = -1) {
  using Scalar = typename Derived::Scalar;
  if (nodal.rows() != quad.size() || nodal.cols() != 3) {
    throw ShapeError("analyze: nodal matrix must be " + std::to_string(quad.size()) + " x 3");
  }
  if (quad.modes() != basis.modes_per_dim() || quad.dim() != basis.dim()) {
    throw ShapeError("analyze: quadrature was built for a different basis");
  }
  const Parity basis_parity = Parity::of(basis);
  for (int axis = 0; axis < basis.dim(); ++axis) {
    const bool test_sine = basis_parity.sine(axis) != (axis == derivative_test_axis);
    const bool same = test_sine == parity.sine(axis);
    const bool ok = same ? quad.integrates_exactly(factors + 1) : quad.expands_exactly(factors);
    if (!ok) throw QuadratureError(detail::parity_message("analyze"));
  }
  const Extents& m = quad.points();
  std::array<Eigen::Index, 4> shape{m[0], m[1], m[2], 3};
  std::vector<Scalar> a(static_cast<std::size_t>(quad.size() * 3));
  for (int c = 0; c < 3; ++c) {
    for (Eigen::Index q = 0; q < quad.size(); ++q) {
      a[static_cast<std::size_t>(q + c * quad.size())] = nodal(q, c);
    }
  }
  std::vector<Scalar> b;
  for (int axis = 0; axis < basis.dim(); ++axis) {
    detail::apply_axis(a, b, shape, axis,
                       quad.analysis(axis, axis == derivative_test_axis, parity.sine(axis)));
    a.swap(b);
  }
  const Extents& n = basis.modes_per_dim();
  const Eigen::Index nt = static_cast<Eigen::Index>(n[0]) * n[1] * n[2];
  CoeffMatrix<Scalar> coeffs(basis.size(), 3);
  for (Eigen::Index k = 0; k < basis.size(); ++k) {
    const Eigen::Index off = basis.tensor_offset(k);
    for (int c = 0; c < 3; ++c) coeffs(k, c) = a[static_cast<std::size_t>(off + c * nt)];
  }
  return coeffs;
}

/// Projection of nodal samples that lie in the span of the basis itself.
template <typename Derived>
CoeffMatrix<typename Derived::Scalar> analyze(const Basis& basis,
                                              const Eigen::MatrixBase<Derived>& nodal) {
  return analyze(basis, basis.quadrature(), nodal, Parity::of(basis), 1);
}

/// Midpoint sum of a scalar nodal function (exact for cosine-parity
/// trigonometric polynomials below the grid's resolution).
template <typename Derived>
typename Derived::Scalar quadrature_sum(const Quadrature& quad,
                                        const Eigen::MatrixBase<Derived>& values) {
  if (values.size() != quad.size()) throw ShapeError("quadrature_sum: size mismatch");
  return values.sum() * static_cast<typename Derived::Scalar>(quad.weight());
}

/// Pointwise cross product of two nodal vector fields.
template <typename A, typename B>
NodalMatrix<typename A::Scalar> pointwise_cross(const Eigen::MatrixBase<A>& a,
                                                const Eigen::MatrixBase<B>& b) {
  NodalMatrix<typename A::Scalar> out(a.rows(), 3);
  out.col(0) = a.col(1).cwiseProduct(b.col(2)) - a.col(2).cwiseProduct(b.col(1));
  out.col(1) = a.col(2).cwiseProduct(b.col(0)) - a.col(0).cwiseProduct(b.col(2));
  out.col(2) = a.col(0).cwiseProduct(b.col(1)) - a.col(1).cwiseProduct(b.col(0));
  return out;
}

}  // namespace llb

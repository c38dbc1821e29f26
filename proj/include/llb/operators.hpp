#pragma once

#include "llb/field.hpp"
#include "llb/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace llb {

/// Temperature data from which kappa2 and mu derive.
struct Provenance {
  double temperature = 0.0;
  double curie_temperature = 0.0;
  double chi_parallel = 0.0;
};

/// Coefficients of du/dt = kappa1 Lap u + gamma u x Lap u - kappa2 (1 + mu |u|^2) u.
struct ModelParams {
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double gamma = 1.0;
  double mu = 1.0;
  std::optional<Provenance> provenance;

  /// kappa2 = kappa1 / chi_par, mu = 3 T / (5 (T - Tc)).
  static ModelParams from_temperature(double kappa1, double gamma, double temperature,
                                      double curie_temperature, double chi_parallel);

  void validate() const;
  /// Non-fatal notes for parameters outside kappa1, kappa2, gamma, mu > 0.
  [[nodiscard]] std::vector<std::string> regime_warnings() const;
};

/// F1: Lap u, diagonal in the eigenbasis.
template <typename Scalar>
BasicSpectralField<Scalar> laplacian(const BasicSpectralField<Scalar>& u) {
  BasicSpectralField<Scalar> out = u;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lambda =
      u.basis().eigenvalues().template cast<Scalar>();
  out.coeffs().array().colwise() *= -lambda.array();
  return out;
}

/// F2: Pi_n (u x Lap u), evaluated on the dealiasing grid.
template <typename Scalar>
BasicSpectralField<Scalar> cross_laplacian(const BasicSpectralField<Scalar>& u) {
  const Basis& basis = u.basis();
  const Quadrature& quad = basis.quadrature();
  const NodalMatrix<Scalar> a = synthesize(basis, quad, u.coeffs());
  const NodalMatrix<Scalar> b = synthesize(basis, quad, laplacian(u).coeffs());
  const Parity p = Parity::of(basis);
  return BasicSpectralField<Scalar>(u.basis_ptr(),
                                    analyze(basis, quad, pointwise_cross(a, b), p * p, 2));
}

/// Pi_n (|u|^2 u).
template <typename Scalar>
BasicSpectralField<Scalar> cubic_part(const BasicSpectralField<Scalar>& u) {
  const Basis& basis = u.basis();
  const Quadrature& quad = basis.quadrature();
  NodalMatrix<Scalar> a = synthesize(basis, quad, u.coeffs());
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mag2 = a.rowwise().squaredNorm();
  a.array().colwise() *= mag2.array();
  return BasicSpectralField<Scalar>(u.basis_ptr(), analyze(basis, quad, a, Parity::of(basis), 3));
}

/// F3: Pi_n ((1 + mu |u|^2) u) = u + mu Pi_n(|u|^2 u).
template <typename Scalar>
BasicSpectralField<Scalar> cubic_term(const BasicSpectralField<Scalar>& u,
                                      const ModelParams& params) {
  if (params.mu == 0.0) return u;
  BasicSpectralField<Scalar> out = cubic_part(u);
  out *= static_cast<Scalar>(params.mu);
  out += u;
  return out;
}

/// kappa1 F1(u) + gamma F2(u) - kappa2 F3(u).
template <typename Scalar>
BasicSpectralField<Scalar> rhs(const BasicSpectralField<Scalar>& u, const ModelParams& params) {
  BasicSpectralField<Scalar> out = laplacian(u);
  out *= static_cast<Scalar>(params.kappa1);
  if (params.gamma != 0.0) {
    BasicSpectralField<Scalar> cross = cross_laplacian(u);
    cross *= static_cast<Scalar>(params.gamma);
    out += cross;
  }
  if (params.kappa2 != 0.0) {
    BasicSpectralField<Scalar> cubic = cubic_term(u, params);
    cubic *= static_cast<Scalar>(-params.kappa2);
    out += cubic;
  }
  return out;
}

/// The three Galerkin maps, addressable by name for probing.
enum class GalerkinMap { laplacian, cross_laplacian, cubic };

template <typename Scalar>
BasicSpectralField<Scalar> apply_map(GalerkinMap map, const BasicSpectralField<Scalar>& u,
                                     const ModelParams& params) {
  switch (map) {
    case GalerkinMap::laplacian:
      return laplacian(u);
    case GalerkinMap::cross_laplacian:
      return cross_laplacian(u);
    case GalerkinMap::cubic:
      return cubic_term(u, params);
  }
  return u;
}

GalerkinMap parse_map(const std::string& name);
std::string to_string(GalerkinMap map);

}  // namespace llb

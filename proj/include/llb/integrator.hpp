#pragma once

#include "llb/field.hpp"
#include "llb/operators.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace llb {

enum class Scheme { imex_euler, rk4 };

/// Deliberate defects for mutation testing of the audit battery.
enum class Fault { none, flip_kappa2_sign };

struct AdaptOptions {
  bool enabled = false;
  /// Relative L2 difference between one full step and two half steps.
  double tolerance = 1e-6;
  double min_dt = 1e-12;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::imex_euler;
  int record_every = 1;
  AdaptOptions adapt;
  Fault fault = Fault::none;

  void validate() const;
};

/// dt (kappa1 lambda_max + kappa2); rk4 requires it to stay <= 2.5.
double rk4_stability_number(double dt, const Basis& basis, const ModelParams& params);
inline constexpr double kRk4StabilityLimit = 2.5;

/// Throws ConfigError when the explicit scheme's guard is violated.
void check_stability(const SolverConfig& config, const Basis& basis, const ModelParams& params);

/// Recorded samples of a Galerkin run.
struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  ModelParams params;
  SolverConfig config;
  std::vector<std::string> warnings;
  std::size_t steps = 0;

  [[nodiscard]] const Basis& basis() const { return states.front().basis(); }
  [[nodiscard]] const BasisPtr& basis_ptr() const { return states.front().basis_ptr(); }
  [[nodiscard]] std::size_t size() const { return times.size(); }
  /// t_0 = 0, strictly increasing times, one shared basis.
  void validate() const;
};

/// Called with the step index, time and state at t = 0 and after every step.
using StepObserver = std::function<void(std::size_t, double, const SpectralField&)>;

/// Linear part (kappa1 Lap - kappa2) implicit, the cross and cubic parts explicit:
/// c_new = (c + dt g(u)) / (1 + dt (kappa1 lambda_k + kappa2)).
template <typename Scalar>
BasicSpectralField<Scalar> step_imex(const BasicSpectralField<Scalar>& u, const ModelParams& params,
                                     double dt) {
  if (!(dt > 0.0)) throw ConfigError("step_imex: dt must be positive");
  BasicSpectralField<Scalar> g(u.basis_ptr());
  if (params.gamma != 0.0) {
    g = cross_laplacian(u);
    g *= static_cast<Scalar>(params.gamma);
  }
  if (params.kappa2 != 0.0 && params.mu != 0.0) {
    BasicSpectralField<Scalar> c = cubic_part(u);
    c *= static_cast<Scalar>(-params.kappa2 * params.mu);
    g += c;
  }
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> denom =
      (1.0 + dt * (params.kappa1 * u.basis().eigenvalues().array() + params.kappa2))
          .template cast<Scalar>();
  BasicSpectralField<Scalar> out = u;
  out.coeffs() += static_cast<Scalar>(dt) * g.coeffs();
  out.coeffs().array().colwise() /= denom;
  return out;
}

/// Classical four-stage Runge-Kutta on the full right-hand side.
template <typename Scalar>
BasicSpectralField<Scalar> step_rk4(const BasicSpectralField<Scalar>& u, const ModelParams& params,
                                    double dt) {
  if (!(dt > 0.0)) throw ConfigError("step_rk4: dt must be positive");
  const double guard = rk4_stability_number(dt, u.basis(), params);
  if (guard > kRk4StabilityLimit) {
    throw ConfigError("step_rk4: dt (kappa1 lambda_max + kappa2) = " + std::to_string(guard) +
                      " exceeds " + std::to_string(kRk4StabilityLimit));
  }
  const Scalar h = static_cast<Scalar>(dt);
  const Scalar half = h / Scalar(2);
  const BasicSpectralField<Scalar> k1 = rhs(u, params);
  const BasicSpectralField<Scalar> k2 = rhs(u + half * k1, params);
  const BasicSpectralField<Scalar> k3 = rhs(u + half * k2, params);
  const BasicSpectralField<Scalar> k4 = rhs(u + h * k3, params);
  BasicSpectralField<Scalar> out = u;
  out.coeffs() += (h / Scalar(6)) *
                  (k1.coeffs() + Scalar(2) * k2.coeffs() + Scalar(2) * k3.coeffs() + k4.coeffs());
  return out;
}

template <typename Scalar>
BasicSpectralField<Scalar> step(Scheme scheme, const BasicSpectralField<Scalar>& u,
                                const ModelParams& params, double dt) {
  return scheme == Scheme::rk4 ? step_rk4(u, params, dt) : step_imex(u, params, dt);
}

/// Advances u0 from 0 to config.t_end. Records t = 0, every record_every-th
/// step and the final state. Throws NumericalError on a non-finite state.
Trajectory integrate(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                     const StepObserver& observer = {});

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

}  // namespace llb

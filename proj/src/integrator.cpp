#include "llb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace llb {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver.dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver.t_end must be positive");
  if (!(dt < t_end)) throw ConfigError("solver.dt must be smaller than solver.t_end");
  if (record_every < 1) throw ConfigError("solver.record_every must be >= 1");
  if (adapt.enabled && !(adapt.tolerance > 0.0)) {
    throw ConfigError("solver.adapt_tol must be positive");
  }
}

double rk4_stability_number(double dt, const Basis& basis, const ModelParams& params) {
  return dt * (params.kappa1 * basis.lambda_max() + std::abs(params.kappa2));
}

void check_stability(const SolverConfig& config, const Basis& basis, const ModelParams& params) {
  if (config.scheme != Scheme::rk4) return;
  const double guard = rk4_stability_number(config.dt, basis, params);
  if (guard > kRk4StabilityLimit) {
    std::ostringstream msg;
    msg << "rk4 stability guard: dt (kappa1 lambda_max + kappa2) = " << guard << " > "
        << kRk4StabilityLimit;
    throw ConfigError(msg.str());
  }
}

void Trajectory::validate() const {
  if (times.empty() || times.size() != states.size()) {
    throw ShapeError("trajectory: times and states must be nonempty and of equal length");
  }
  if (times.front() != 0.0) throw ShapeError("trajectory: first sample must be at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ShapeError("trajectory: times must increase strictly");
    if (!states[i].basis().same_as(states.front().basis())) {
      throw ShapeError("trajectory: samples live on different bases");
    }
  }
}

namespace {

void check_finite(const SpectralField& u, std::size_t step, double t) {
  const double l2 = u.coeffs().norm();
  if (!u.all_finite() || !std::isfinite(l2)) {
    std::ostringstream msg;
    msg << "non-finite state at step " << step << " (t = " << t << "): L2 norm = " << l2;
    throw NumericalError(msg.str());
  }
}

}  // namespace

Trajectory integrate(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                     const StepObserver& observer) {
  params.validate();
  config.validate();
  require_finite(u0, "integrate");

  ModelParams effective = params;
  if (config.fault == Fault::flip_kappa2_sign) effective.kappa2 = -params.kappa2;
  check_stability(config, u0.basis(), effective);

  Trajectory traj;
  traj.params = params;
  traj.config = config;
  traj.warnings = params.regime_warnings();
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  if (observer) observer(0, 0.0, u0);

  SpectralField u = u0;
  std::size_t accepted = 0;
  const auto accept = [&](double t) {
    ++accepted;
    check_finite(u, accepted, t);
    if (observer) observer(accepted, t, u);
    const bool last = t >= config.t_end;
    if (accepted % static_cast<std::size_t>(config.record_every) == 0 || last) {
      traj.times.push_back(t);
      traj.states.push_back(u);
    }
  };

  if (!config.adapt.enabled) {
    const auto steps =
        static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
    for (std::size_t m = 0; m < steps; ++m) {
      const double t0 = static_cast<double>(m) * config.dt;
      const double t1 = m + 1 == steps ? config.t_end : static_cast<double>(m + 1) * config.dt;
      u = step(config.scheme, u, effective, t1 - t0);
      accept(t1);
    }
  } else {
    double t = 0.0;
    double h = config.dt;
    while (t < config.t_end) {
      h = std::min(h, config.t_end - t);
      const SpectralField full = step(config.scheme, u, effective, h);
      const SpectralField half =
          step(config.scheme, step(config.scheme, u, effective, 0.5 * h), effective, 0.5 * h);
      const double err = (full.coeffs() - half.coeffs()).norm() /
                         std::max(1.0, half.coeffs().norm());
      if (!(err <= config.adapt.tolerance) && h > config.adapt.min_dt) {
        h *= 0.5;
        continue;
      }
      u = half;
      t = (config.t_end - t <= h) ? config.t_end : t + h;
      accept(t);
      if (err < 0.25 * config.adapt.tolerance) h = std::min(2.0 * h, config.dt);
    }
  }
  traj.steps = accepted;
  return traj;
}

std::string to_string(Scheme scheme) { return scheme == Scheme::rk4 ? "rk4" : "imex_euler"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "imex_euler" || name == "imex") return Scheme::imex_euler;
  if (name == "rk4") return Scheme::rk4;
  throw ConfigError("unknown scheme '" + name + "' (expected imex_euler or rk4)");
}

}  // namespace llb

#include "llb/integrator.hpp"
#include "llb/oracle.hpp"
#include "llb/weak_form.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace llb;

namespace {

constexpr double pi = std::numbers::pi;

BasisPtr line_basis(int n, Boundary bc = Boundary::neumann) {
  DomainSpec d;
  d.bc = bc;
  return build_basis(d, {n});
}

SpectralField constant_field(const BasisPtr& b, const Eigen::Vector3d& value) {
  SpectralField u(b);
  u.coeffs().row(0) = value.transpose() * std::sqrt(pi);
  return u;
}

double pointwise_sq(const SpectralField& u) { return u.coeffs().row(0).squaredNorm() / pi; }

SolverConfig config(double dt, double t_end, Scheme s = Scheme::imex_euler, int every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.scheme = s;
  c.record_every = every;
  return c;
}

}  // namespace

TEST(Integrator, ImexConstantFieldHandValue) {
  const auto b = line_basis(4);
  ModelParams p;
  p.gamma = 3.0;
  const SpectralField u = step_imex(constant_field(b, {1, 0, 0}), p, 0.1);
  EXPECT_NEAR(u.coeffs()(0, 0) / std::sqrt(pi), (1 - 0.1) / 1.1, 1e-15);
  EXPECT_LT(u.coeffs().bottomRows(3).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Integrator, ImexSingleModeHandValue) {
  const auto b = line_basis(4);
  ModelParams p;
  p.mu = 0.0;
  p.gamma = 0.0;
  SpectralField u(b);
  u.coeffs()(1, 2) = 1.0;
  EXPECT_NEAR(step_imex(u, p, 0.1).coeffs()(1, 2), 1.0 / 1.2, 1e-15);
}

TEST(Integrator, ZeroFieldIsEquilibrium) {
  const auto b = line_basis(8);
  const SpectralField z(b);
  EXPECT_TRUE(step_imex(z, {}, 0.1).coeffs().isZero(0.0));
  EXPECT_TRUE(step_rk4(z, {}, 0.01).coeffs().isZero(0.0));
  const Trajectory t = integrate(z, {}, config(0.01, 0.1, Scheme::rk4, 3));
  for (const auto& s : t.states) EXPECT_TRUE(s.coeffs().isZero(0.0));
}

TEST(Integrator, BernoulliImexFirstOrder) {
  const auto b = line_basis(4);
  const ModelParams p;
  const double exact = oracle::constant_field_exact(1.0, p, 0.5);
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const Trajectory t = integrate(constant_field(b, {1, 0, 0}), p, config(dt, 0.5));
    const double err = std::abs(pointwise_sq(t.states.back()) - exact * exact);
    if (prev > 0.0) EXPECT_NEAR(prev / err, 2.0, 0.2);
    prev = err;
  }
}

TEST(Integrator, BernoulliRk4FourthOrder) {
  const auto b = line_basis(4);
  const ModelParams p;
  // The h^5 term is still visible at coarse steps, so the order is read off near the asymptotic range.
  const double t_end = 0.2;
  const double exact = oracle::constant_field_exact(1.0, p, t_end);
  const auto error = [&](double dt) {
    const Trajectory t = integrate(constant_field(b, {1, 0, 0}), p, config(dt, t_end, Scheme::rk4));
    return std::abs(pointwise_sq(t.states.back()) - exact * exact);
  };
  const double e1 = error(t_end / 64);
  const double e2 = error(t_end / 128);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.5);
  EXPECT_LT(e2, 1e-13);
}

TEST(Integrator, SingleModeRk4MatchesExponential) {
  const auto b = line_basis(4);
  ModelParams p;
  p.mu = 0.0;
  SpectralField u(b);
  u.coeffs()(1, 0) = 1.0;
  const Trajectory t = integrate(u, p, config(1e-3, 1.0, Scheme::rk4, 100));
  EXPECT_NEAR(t.states.back().coeffs()(1, 0), std::exp(-2.0), 1e-12);
  EXPECT_NEAR(t.times.back(), 1.0, 0.0);
}

TEST(Integrator, ConstantDataKeepsDirection) {
  const auto b = line_basis(6);
  const Eigen::Vector3d dir = Eigen::Vector3d(0.3, -0.4, 1.2);
  const Trajectory t = integrate(constant_field(b, dir), {}, config(1e-3, 0.5, Scheme::imex_euler, 50));
  for (const auto& s : t.states) {
    const Eigen::Vector3d v = s.coeffs().row(0).transpose();
    const double angle = std::asin(std::min(1.0, v.normalized().cross(dir.normalized()).norm()));
    EXPECT_LE(angle, 1e-10);
    EXPECT_LT(s.coeffs().bottomRows(5).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Integrator, RecordingAndFinalSample) {
  const auto b = line_basis(4);
  const Trajectory t = integrate(constant_field(b, {1, 0, 0}), {}, config(0.1, 1.0, Scheme::imex_euler, 3));
  ASSERT_GE(t.size(), 2u);
  EXPECT_EQ(t.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(t.times.back(), 1.0);
  EXPECT_EQ(t.steps, 10u);
  EXPECT_NO_THROW(t.validate());
}

TEST(Integrator, ObserverSeesEveryStep) {
  const auto b = line_basis(4);
  std::vector<double> seen;
  integrate(SpectralField(b), {}, config(0.25, 1.0), [&](std::size_t, double t, const SpectralField&) {
    seen.push_back(t);
  });
  EXPECT_EQ(seen, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
}

TEST(Integrator, Rk4GuardEnforced) {
  const auto b = line_basis(64);
  SpectralField u(b);
  EXPECT_THROW(integrate(u, {}, config(1e-3, 0.1, Scheme::rk4)), ConfigError);
  EXPECT_THROW(step_rk4(u, {}, 1e-3), ConfigError);
  EXPECT_NO_THROW(integrate(u, {}, config(1e-3, 0.01, Scheme::imex_euler)));
}

TEST(Integrator, ConfigValidation) {
  const auto b = line_basis(4);
  EXPECT_THROW(integrate(SpectralField(b), {}, config(-1.0, 1.0)), ConfigError);
  EXPECT_THROW(integrate(SpectralField(b), {}, config(2.0, 1.0)), ConfigError);
  EXPECT_THROW(integrate(SpectralField(b), {}, config(0.1, 1.0, Scheme::imex_euler, 0)), ConfigError);
  EXPECT_EQ(parse_scheme("rk4"), Scheme::rk4);
  EXPECT_EQ(parse_scheme("imex_euler"), Scheme::imex_euler);
  EXPECT_THROW(parse_scheme("euler"), ConfigError);
}

TEST(Integrator, BlowUpReportsStep) {
  // A wrong-sign cubic term drives large constant data to infinity.
  const auto b = line_basis(2);
  SolverConfig c = config(1e-2, 5.0);
  c.fault = Fault::flip_kappa2_sign;
  try {
    integrate(constant_field(b, {10, 0, 0}), {}, c);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos) << e.what();
  }
}

TEST(Integrator, AdaptiveStepping) {
  const auto b = line_basis(4);
  SolverConfig c = config(0.05, 0.5);
  c.adapt.enabled = true;
  c.adapt.tolerance = 1e-5;
  const ModelParams p;
  const Trajectory t = integrate(constant_field(b, {1, 0, 0}), p, c);
  const double exact = oracle::constant_field_exact(1.0, p, 0.5);
  EXPECT_DOUBLE_EQ(t.times.back(), 0.5);
  const Trajectory fixed = integrate(constant_field(b, {1, 0, 0}), p, config(0.05, 0.5));
  EXPECT_LT(std::abs(pointwise_sq(t.states.back()) - exact * exact),
            std::abs(pointwise_sq(fixed.states.back()) - exact * exact));
}

TEST(WeakForm, ZeroTrajectoryResidualIsZero) {
  const auto b = line_basis(8);
  const Trajectory t = integrate(SpectralField(b), {}, config(0.01, 0.2));
  EXPECT_EQ(WeakResidualTable(t).max_abs(8), 0.0);
  EXPECT_EQ(weak_residual(t, ModeIndex{{3, 0, 0}}, 1, 0.1), 0.0);
}

TEST(WeakForm, ConstantFieldFirstOrder) {
  const auto b = line_basis(4);
  const ModelParams p;
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const Trajectory t = integrate(constant_field(b, {1, 0, 0}), p, config(dt, 0.5));
    const double r = std::abs(weak_residual(t, ModeIndex{}, 0, 0.5));
    if (prev > 0.0) EXPECT_NEAR(prev / r, 2.0, 0.25);
    prev = r;
  }
}

TEST(WeakForm, SingleModeLinearDecay) {
  const auto b = line_basis(8);
  ModelParams p;
  p.gamma = 0.0;
  p.mu = 0.0;
  SpectralField u(b);
  u.coeffs()(1, 0) = 1.0;
  const double dt = 1e-3;
  const Trajectory t = integrate(u, p, config(dt, 1.0));
  EXPECT_LE(WeakResidualTable(t).max_abs(8), 10 * dt);
  EXPECT_NEAR(t.states.back().coeffs()(1, 0), oracle::single_mode_exact(*b, b->mode(1), 1.0, p, 1.0), 1e-3);
}

TEST(WeakForm, OutsideHorizonRejected) {
  const auto b = line_basis(4);
  const Trajectory t = integrate(SpectralField(b), {}, config(0.1, 1.0));
  EXPECT_THROW(weak_residual(t, ModeIndex{}, 0, 1.5), ConfigError);
  EXPECT_THROW(weak_residual(t, ModeIndex{{9, 0, 0}}, 0, 0.5), ConfigError);
}

TEST(Integrator, LongDoubleStep) {
  const auto b = line_basis(6);
  SpectralField u(b);
  u.coeffs()(2, 1) = 0.4;
  u.coeffs()(0, 0) = 1.0;
  const auto w = step_rk4(u.cast<long double>(), ModelParams{}, 1e-3);
  EXPECT_LT((w.cast<double>() - step_rk4(u, ModelParams{}, 1e-3)).coeffs().cwiseAbs().maxCoeff(), 1e-14);
}

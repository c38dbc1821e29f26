#include "llb/integrator.hpp"
#include "llb/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace llb;

namespace {

constexpr double pi = std::numbers::pi;

}

TEST(Oracle, BernoulliClosedForm) {
  ModelParams p;
  EXPECT_EQ(oracle::constant_field_exact(0.0, p, 3.0), 0.0);
  const double r = oracle::constant_field_exact(1.0, p, 0.5);
  EXPECT_NEAR(r * r, 1.0 / (2.0 * std::numbers::e - 1.0), 1e-15);
  EXPECT_NEAR(r * r, 0.225399, 1e-6);
  p.mu = 0.0;
  p.kappa2 = 0.7;
  EXPECT_NEAR(oracle::constant_field_exact(2.0, p, 1.3), 2.0 * std::exp(-0.7 * 1.3), 1e-15);
}

TEST(Oracle, BernoulliAgreesWithScalarIntegrator) {
  for (double mu : {0.0, 0.5, 1.0, 3.0}) {
    ModelParams p;
    p.mu = mu;
    p.kappa2 = 1.3;
    for (double r0 : {0.2, 1.0, 2.5}) {
      EXPECT_NEAR(oracle::constant_field_exact(r0, p, 0.8), oracle::constant_field_reference(r0, p, 0.8),
                  1e-12);
    }
  }
}

TEST(Oracle, SingleModeExact) {
  DomainSpec d;
  const auto b = build_basis(d, {4});
  ModelParams p;
  p.mu = 0.0;
  EXPECT_NEAR(oracle::single_mode_exact(*b, b->mode(0), 1.0, p, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(oracle::single_mode_exact(*b, b->mode(1), 1.0, p, 1.0), 0.1353353, 1e-7);
  EXPECT_EQ(oracle::single_mode_exact(*b, b->mode(2), 0.3, p, 0.0), 0.3);
  p.mu = 1.0;
  EXPECT_THROW(oracle::single_mode_exact(*b, b->mode(1), 1.0, p, 1.0), ConfigError);
}

TEST(Oracle, AnalyticCaseValidation) {
  DomainSpec d;
  const auto b = build_basis(d, {4});
  ModelParams p;
  EXPECT_THROW(oracle::AnalyticCase::single_mode_linear(*b, b->mode(1), 1.0, p), ConfigError);
  p.mu = 0.0;
  const auto c = oracle::AnalyticCase::single_mode_linear(*b, b->mode(1), 2.0, p);
  EXPECT_NEAR(c.evaluate(1.0), 2.0 * std::exp(-2.0), 1e-15);
  const auto k = oracle::AnalyticCase::constant_bernoulli(1.0, ModelParams{});
  EXPECT_NEAR(k.evaluate(0.5), std::sqrt(1.0 / (2.0 * std::numbers::e - 1.0)), 1e-15);
}

TEST(Oracle, DenseProjectOfBasisFunction) {
  DomainSpec d;
  d.dim = 2;
  d.bc = Boundary::dirichlet;
  const auto b = build_basis(d, {4});
  const ModeIndex k = b->mode(5);
  const SpectralField f = oracle::dense_project(
      [&](const oracle::Point& x) { return Eigen::Vector3d(0.0, oracle::basis_function(*b, k, x), 0.0); }, b);
  for (Eigen::Index m = 0; m < b->size(); ++m) {
    EXPECT_NEAR(f.coeffs()(m, 1), m == 5 ? 1.0 : 0.0, 1e-13);
    EXPECT_EQ(f.coeffs()(m, 0), 0.0);
  }
  const SpectralField z = oracle::dense_project([](const oracle::Point&) { return Eigen::Vector3d::Zero(); }, b);
  EXPECT_TRUE(z.coeffs().isZero(0.0));
}

TEST(Oracle, DenseProjectRefinementAgrees) {
  DomainSpec d;
  const auto b = build_basis(d, {6});
  const auto f = [&](const oracle::Point& x) {
    return Eigen::Vector3d(oracle::basis_function(*b, b->mode(2), x) * oracle::basis_function(*b, b->mode(5), x),
                           0.0, 0.0);
  };
  const SpectralField a = oracle::dense_project(f, b, 4);
  const SpectralField c = oracle::dense_project(f, b, 8);
  EXPECT_LT((a - c).coeffs().cwiseAbs().maxCoeff(), 1e-13);
  // cos2 cos5 = (cos3 + cos7)/2 with normalised factors; only mode 3 is retained.
  EXPECT_NEAR(a.coeffs()(3, 0), 1.0 / std::sqrt(2.0 * pi), 1e-13);
}

TEST(Oracle, FiniteDifferenceZeroAndConstant) {
  DomainSpec d;
  ModelParams p;
  const auto zero = oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d::Zero(); }, d, p,
                                         {32, 1, 1}, 1e-3, 0.1, 10);
  for (const auto& s : zero.states) EXPECT_TRUE(s.isZero(0.0));

  const auto c = oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d(1.0, 0.0, 0.0); }, d,
                                      p, {16, 1, 1}, 1e-4, 0.5, 1000);
  const double exact = oracle::constant_field_exact(1.0, p, 0.5);
  EXPECT_NEAR(c.times.back(), 0.5, 1e-12);
  // Same first-order IMEX splitting as the spectral solver.
  EXPECT_NEAR(c.states.back()(7, 0), exact, 2e-5);
  EXPECT_LT(c.states.back().col(0).maxCoeff() - c.states.back().col(0).minCoeff(), 1e-12);
}

TEST(Oracle, FiniteDifferenceDirichletSingleMode) {
  DomainSpec d;
  d.bc = Boundary::dirichlet;
  ModelParams p;
  p.mu = 0.0;
  p.gamma = 0.0;
  const int cells = 128;
  const auto r = oracle::fd_reference([](const oracle::Point& x) { return Eigen::Vector3d(std::sin(x[0]), 0, 0); },
                                      d, p, {cells, 1, 1}, 1e-4, 0.2, 2000);
  const double h = pi / cells;
  // Implicit Euler on the discrete eigenvalue of sin x.
  const double lambda_h = 4.0 / (h * h) * std::pow(std::sin(h / 2.0), 2);
  const double factor = std::pow(1.0 / (1.0 + 1e-4 * (lambda_h + 1.0)), 2000);
  for (int i = 0; i < cells; i += 17) {
    EXPECT_NEAR(r.states.back()(i, 0), factor * std::sin((i + 0.5) * h), 1e-12);
  }
}

TEST(Oracle, FiniteDifferenceGuards) {
  DomainSpec d;
  ModelParams p;
  EXPECT_THROW(oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d::Zero(); }, d, p,
                                    {16, 1, 1}, 0.3, 1.0),
               ConfigError);
  p.mu = 100.0;
  EXPECT_THROW(oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d(10, 0, 0); }, d, p,
                                    {16, 1, 1}, 0.1, 1.0),
               ConfigError);
}

TEST(Oracle, L2DistanceToFiniteDifference) {
  DomainSpec d;
  const auto b = build_basis(d, {4});
  SpectralField u(b);
  u.coeffs()(0, 1) = 2.0 * std::sqrt(pi);  // pointwise (0, 2, 0)
  const auto same = oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d(0, 2, 0); }, d,
                                         ModelParams{}, {8, 1, 1}, 1e-3, 2e-3, 1);
  EXPECT_NEAR(oracle::l2_distance(u, same, 0), 0.0, 1e-14);
  // |(0, 2, 0) - 0| over [0, pi] is 2 sqrt(pi).
  EXPECT_NEAR(oracle::l2_distance(SpectralField(b), same, 0), 2.0 * std::sqrt(pi), 1e-13);
  EXPECT_THROW(oracle::l2_distance(u, same, 7), ConfigError);
}

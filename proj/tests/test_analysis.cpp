#include "llb/audit.hpp"
#include "llb/convergence.hpp"
#include "llb/init.hpp"
#include "llb/ledger.hpp"
#include "llb/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace llb;

namespace {

constexpr double pi = std::numbers::pi;

BasisPtr line_basis(int n, Boundary bc = Boundary::neumann) {
  DomainSpec d;
  d.bc = bc;
  return build_basis(d, {n});
}

SolverConfig config(double dt, double t_end, int every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

}  // namespace

TEST(Ledger, ZeroTrajectoryIsAllZero) {
  const auto b = line_basis(8);
  EnergyLedger ledger;
  integrate_with_ledger(SpectralField(b), {}, config(0.01, 0.1), ledger);
  ASSERT_EQ(ledger.size(), 11u);
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    for (std::size_t c = 0; c < kLedgerColumns; ++c) {
      EXPECT_EQ(ledger.value(i, static_cast<LedgerColumn>(c)), 0.0);
      EXPECT_EQ(ledger.integral(i, static_cast<LedgerColumn>(c)), 0.0);
    }
  }
  const AuditReport r = audit_energy(ledger, {}, 0.01);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.check("residual_1").residual, 0.0);
  EXPECT_EQ(r.check("residual_2").residual, 0.0);
}

TEST(Ledger, ColumnsMatchFieldNorms) {
  const auto b = line_basis(8);
  const SpectralField u = InitialCondition::random(4, 1.0).project(b);
  ModelParams p;
  p.mu = 0.5;
  const LedgerValues v = ledger_values(u, p);
  EXPECT_NEAR(v[0], std::pow(norm(u, NormKind::l2()), 2), 1e-13);
  EXPECT_NEAR(v[1], std::pow(norm(u, NormKind::h1_semi()), 2), 1e-12);
  EXPECT_NEAR(v[3], std::pow(norm(u, NormKind::l4()), 4), 1e-12);
  // Unprojected cubic dominates its projection.
  EXPECT_GE(v[5] + 1e-12, v[8]);
  for (double x : v) EXPECT_GE(x, 0.0);
}

TEST(Ledger, TrapezoidIntegralsAndMonotoneTimes) {
  EnergyLedger ledger;
  LedgerValues a{};
  a.fill(1.0);
  ledger.append(0.0, a);
  a.fill(3.0);
  ledger.append(0.5, a);
  EXPECT_DOUBLE_EQ(ledger.integral(1, LedgerColumn::lap_sq), 1.0);
  EXPECT_THROW(ledger.append(0.5, a), std::invalid_argument);
  a[2] = std::nan("");
  EXPECT_THROW(ledger.append(1.0, a), std::invalid_argument);
  std::ostringstream csv;
  ledger.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, 60), "t,l2_sq,h1semi_sq,lap_sq,l4_quart,cross_l32_sq,cubic_l2_sq,c");
}

TEST(EnergyAudit, EmptyLedgerRejected) {
  EXPECT_THROW(audit_energy(EnergyLedger{}, {}, 0.1), ConfigError);
}

TEST(EnergyAudit, ConstantFieldResidualFirstOrder) {
  const auto b = line_basis(4);
  const ModelParams p;
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    EnergyLedger ledger;
    integrate_with_ledger(InitialCondition::constant({1, 0, 0}).project(b), p, config(dt, 0.5), ledger);
    const AuditReport r = audit_energy(ledger, p, dt);
    EXPECT_TRUE(r.passed()) << r.to_json();
    const double m = r.metrics.at("max_abs_residual_1");
    if (prev > 0.0) EXPECT_NEAR(prev / m, 2.0, 0.4);
    prev = m;
  }
}

TEST(EnergyAudit, LinearSingleModeEquality) {
  const auto b = line_basis(8);
  ModelParams p;
  p.gamma = 0.0;
  p.mu = 0.0;
  SpectralField u(b);
  u.coeffs()(2, 0) = 1.0;
  const double dt = 1e-3;
  EnergyLedger ledger;
  integrate_with_ledger(u, p, config(dt, 1.0), ledger);
  const EnergyResiduals r = energy_residuals(ledger, p);
  for (double x : r.residual1) EXPECT_LE(std::abs(x), 10 * dt);
}

TEST(EnergyAudit, MutatedKappa2SignFails) {
  const auto b = line_basis(16);
  const SpectralField u0 = InitialCondition::random(3, 1.5).project(b);
  const ModelParams p;
  SolverConfig c = config(1e-3, 0.2);
  EnergyLedger good, bad;
  integrate_with_ledger(u0, p, c, good);
  c.fault = Fault::flip_kappa2_sign;
  integrate_with_ledger(u0, p, c, bad);
  EXPECT_TRUE(audit_energy(good, p, c.dt).passed());
  EXPECT_FALSE(audit_energy(bad, p, c.dt).passed());
}

TEST(AuditReport, PassIffResidualBelowTolerance) {
  AuditReport r;
  r.name = "x";
  EXPECT_TRUE(r.add("a", -1.0, 0.0).pass);
  EXPECT_TRUE(r.add("b", 1e-3, 1e-3).pass);
  EXPECT_FALSE(r.add("c", std::nan(""), 1.0).pass);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures().size(), 1u);
  EXPECT_NE(r.to_json().find("\"name\": \"x\""), std::string::npos);
}

TEST(NonlinearBounds, ZeroAndConstantData) {
  const ModelParams p;
  std::vector<EnergyLedger> zero(3), constant(3);
  std::vector<std::pair<int, const EnergyLedger*>> zf, cf;
  const int ns[] = {4, 8, 16};
  for (int i = 0; i < 3; ++i) {
    const auto b = line_basis(ns[i]);
    integrate_with_ledger(SpectralField(b), p, config(0.01, 0.2), zero[i]);
    integrate_with_ledger(InitialCondition::constant({0.5, 0.5, 0}).project(b), p, config(0.01, 0.2), constant[i]);
    zf.emplace_back(ns[i], &zero[i]);
    cf.emplace_back(ns[i], &constant[i]);
  }
  const AuditReport z = audit_nonlinear_bounds(zf);
  EXPECT_TRUE(z.passed());
  EXPECT_EQ(z.metrics.at("int_cubic_l2_sq@n=8"), 0.0);
  const AuditReport c = audit_nonlinear_bounds(cf);
  EXPECT_TRUE(c.passed());
  EXPECT_NEAR(c.metrics.at("int_cubic_l2_sq@n=4"), c.metrics.at("int_cubic_l2_sq@n=16"), 1e-13);
  EXPECT_THROW(audit_nonlinear_bounds({zf.front()}), ConfigError);
}

TEST(Holder, TrivialTrajectories) {
  const auto b = line_basis(6);
  ModelParams p;
  p.kappa2 = 0.0;
  const Trajectory zero = integrate(SpectralField(b), p, config(0.1, 1.0));
  EXPECT_EQ(holder_quotient(zero, 0.25), 0.0);
  // Constant data with kappa2 = 0 is stationary.
  const Trajectory still = integrate(InitialCondition::constant({1, 0, 0}).project(b), p, config(0.1, 1.0));
  EXPECT_EQ(holder_quotient(still, 0.25), 0.0);
  EXPECT_THROW(holder_quotient(still, 0.5), ConfigError);
  Trajectory one = still;
  one.times.resize(1);
  one.states.erase(one.states.begin() + 1, one.states.end());
  EXPECT_THROW(holder_quotient(one, 0.25), ConfigError);
}

TEST(Lipschitz, DegenerateSamplesRejected) {
  const auto b = line_basis(4);
  const SpectralField u(b);
  EXPECT_THROW(lipschitz_ratio(GalerkinMap::laplacian, u, u, {}), ConfigError);
  EXPECT_THROW(lipschitz_probe(GalerkinMap::laplacian, b, {}, 1.0, 1, 0), ConfigError);
}

TEST(Projection, ArithmeticExample) {
  const auto b = line_basis(3, Boundary::dirichlet);
  SpectralField v(b);
  v.coeffs()(0, 0) = 1.0;
  v.coeffs()(1, 0) = 1.0;
  const double p1 = norm(truncate_modes(v, 1), NormKind::x_neg_beta(1.0));
  EXPECT_NEAR(p1 * p1, 0.25, 1e-15);
  const AuditReport r = projection_checks({v}, {1, 2, 3}, 1.0);
  EXPECT_TRUE(r.passed()) << r.to_json();
  EXPECT_THROW(projection_checks({v}, {1}, 0.0), ConfigError);
}

TEST(Projection, InSpanIsIdentity) {
  const auto b = line_basis(16);
  SpectralField v = random_field(b, 5);
  v = truncate_modes(v, 8);
  EXPECT_EQ(truncate_modes(v, 8).coeffs(), v.coeffs());
  EXPECT_TRUE(projection_checks({v}, {8, 16}, 0.5).passed());
}

TEST(Projection, RandomProbesAndTails) {
  const auto b = line_basis(32);
  EXPECT_TRUE(projection_checks(random_probes(b, 20, 1), {4, 8, 16}, 2.0).passed());
  SpectralField x(b);
  for (Eigen::Index m = 0; m < b->size(); ++m) x.coeffs().row(m).setConstant(1.0 / (1.0 + b->eigenvalues()(m)));
  EXPECT_TRUE(projection_checks({x}, {1, 2, 4, 8, 16, 32}, 0.5).passed());
}

TEST(Convergence, LinearFlowInSmallestSpanGivesZeros) {
  DomainSpec d;
  ModelParams p;
  p.gamma = 0.0;
  p.mu = 0.0;
  const auto ic = InitialCondition::from_modes({{ModeIndex{{1, 0, 0}}, {1, 0, 0}}, {ModeIndex{{3, 0, 0}}, {0, 2, 0}}});
  const ConvergenceTable t = convergence_study(ic, d, p, config(1e-3, 0.2, 20), {4, 8, 16});
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.d_C, 0.0);
    EXPECT_EQ(r.d_Lp, 0.0);
  }
  EXPECT_TRUE(t.decreasing(0.1));
  std::ostringstream csv;
  t.write_csv(csv);
  EXPECT_EQ(csv.str(), "n,n_next,d_C,d_Lp\n4,8,0,0\n8,16,0,0\n");
}

TEST(Convergence, ZeroDataAndErrors) {
  DomainSpec d;
  const ConvergenceTable t = convergence_study(InitialCondition::zero(), d, {}, config(1e-2, 0.1), {4, 8});
  EXPECT_EQ(t.rows.at(0).d_C, 0.0);
  EXPECT_THROW(convergence_study(InitialCondition::zero(), d, {}, config(1e-2, 0.1), {8}), ConfigError);
  EXPECT_THROW(convergence_study(InitialCondition::zero(), d, {}, config(1e-2, 0.1), {8, 4}), ConfigError);
  EXPECT_EQ(default_beta_bar(1), 1.0);
  EXPECT_NEAR(default_beta_bar(3), 1.0, 1e-15);
}

TEST(Convergence, NonNestedRejected) {
  std::vector<Trajectory> family;
  DomainSpec a, b;
  b.lengths = {2.0, 1.0, 1.0};
  family.push_back(integrate(SpectralField(build_basis(a, {4})), {}, config(0.1, 0.2)));
  family.push_back(integrate(SpectralField(build_basis(b, {8})), {}, config(0.1, 0.2)));
  EXPECT_THROW(cauchy_differences(family), ShapeError);
}

TEST(InitialData, PresetsProjectAsDocumented) {
  const auto b = line_basis(8);
  const SpectralField c = InitialCondition::parse("constant:1,0,-2", 1).project(b);
  EXPECT_NEAR(c.coeffs()(0, 0), std::sqrt(pi), 1e-14);
  EXPECT_NEAR(c.coeffs()(0, 2), -2.0 * std::sqrt(pi), 1e-14);
  EXPECT_TRUE(c.coeffs().bottomRows(7).isZero(0.0));
  // Random coefficients depend on the mode only, not the basis size.
  const SpectralField r8 = InitialCondition::parse("random:7,1.5", 1).project(b);
  const SpectralField r16 = InitialCondition::parse("random:7,1.5", 1).project(line_basis(16));
  EXPECT_EQ(r16.coeffs().topRows(8), r8.coeffs());
  EXPECT_THROW(InitialCondition::parse("constant:1,2", 1), ConfigError);
  EXPECT_THROW(InitialCondition::parse("random:x,1", 1), ConfigError);
}

TEST(InitialData, ConstantOnDirichletIsProjected) {
  const auto b = line_basis(32, Boundary::dirichlet);
  const SpectralField c = InitialCondition::constant({1, 0, 0}).project(b);
  // <1, sqrt(2/pi) sin kx> = sqrt(2/pi) 2/k for odd k.
  EXPECT_NEAR(c.coeffs()(0, 0), std::sqrt(2.0 / pi) * 2.0, 1e-14);
  EXPECT_NEAR(c.coeffs()(1, 0), 0.0, 1e-15);
  EXPECT_LT(norm(c, NormKind::l2()), std::sqrt(pi));
}

#pragma once

#include "llb/field.hpp"
#include "llb/integrator.hpp"
#include "llb/ledger.hpp"
#include "llb/operators.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace llb {

/// One named inequality: residual is nonpositive when it holds exactly and
/// the check passes iff residual <= tolerance.
struct AuditCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::string name;
  std::vector<AuditCheck> checks;
  /// Diagnostic numbers that are not themselves checks.
  std::map<std::string, double> metrics;

  const AuditCheck& add(const std::string& check, double residual, double tolerance);
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::vector<const AuditCheck*> failures() const;
  [[nodiscard]] const AuditCheck& check(const std::string& check) const;
  /// JSON object: {"name", "pass", "checks": [...], "metrics": {...}}.
  [[nodiscard]] std::string to_json(int indent = 2) const;
};

struct EnergyAuditOptions {
  double c_tol = 10.0;
};

/// Discrete energy inequalities evaluated at every ledger sample:
///   residual_1(t) = |u(t)|^2 + 2 k1 int |grad u|^2 + 2 k2 int (|u|^2 + mu |u|_4^4) - |u(0)|^2
///   residual_2(t) = |grad u(t)|^2 + 2 k1 int |Lap u|^2 - |grad u(0)|^2
/// with tolerance c_tol dt (1 + max(|u0|^2, |grad u0|^2)). Also checks
/// sup_t |u(t)| <= |u(0)| + tol. Metrics include the identity defects
/// (residual_2 plus the cubic pairing integral), which vanish as dt -> 0.
AuditReport audit_energy(const EnergyLedger& ledger, const ModelParams& params, double dt,
                         const EnergyAuditOptions& options = {});

/// Per-sample residual series behind audit_energy.
struct EnergyResiduals {
  std::vector<double> residual1;
  std::vector<double> residual2;
  std::vector<double> defect2;
};
EnergyResiduals energy_residuals(const EnergyLedger& ledger, const ModelParams& params);

/// Final time integrals of the nonlinear ledger columns for a family of mode
/// counts; each must stay below (1 + eps) times the max over the three
/// smallest counts.
AuditReport audit_nonlinear_bounds(const std::vector<std::pair<int, const EnergyLedger*>>& family,
                                   double eps = 0.1);

/// max over sample pairs tau < t of |u(t) - u(tau)|_{L3/2} / (t - tau)^alpha.
double holder_quotient(const Trajectory& trajectory, double alpha, const LpOptions& lp = {});

/// |F(u) - F(v)| / |u - v| in L2; throws if u == v.
double lipschitz_ratio(GalerkinMap map, const SpectralField& u, const SpectralField& v,
                       const ModelParams& params);

struct LipschitzProbe {
  double max_ratio = 0.0;
  int pairs_used = 0;
};

/// Seeded pairs with L2 norm <= ball_radius. The draws depend only on the
/// seed and the basis, so probes at different radii use the same directions.
LipschitzProbe lipschitz_probe(GalerkinMap map, const BasisPtr& basis, const ModelParams& params,
                               double ball_radius, int samples, std::uint64_t seed);

/// Pi_n contraction in X^{-beta} and L2, and monotone X^beta tails, for the
/// leading-mode counts in `ns` applied to every probe. Tolerance 1e-12
/// relative to the probe norm.
AuditReport projection_checks(const std::vector<SpectralField>& probes,
                              const std::vector<Eigen::Index>& ns, double beta);

/// Random fields with standard normal coefficients, seeded.
std::vector<SpectralField> random_probes(const BasisPtr& basis, int count, std::uint64_t seed);

SpectralField random_field(const BasisPtr& basis, std::uint64_t seed);

}  // namespace llb

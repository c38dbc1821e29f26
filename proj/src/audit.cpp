#include "llb/audit.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace llb {

const AuditCheck& AuditReport::add(const std::string& check, double residual, double tolerance) {
  // NaN residuals never pass.
  checks.push_back({check, residual, tolerance, residual <= tolerance});
  return checks.back();
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

std::vector<const AuditCheck*> AuditReport::failures() const {
  std::vector<const AuditCheck*> out;
  for (const AuditCheck& c : checks) {
    if (!c.pass) out.push_back(&c);
  }
  return out;
}

const AuditCheck& AuditReport::check(const std::string& check) const {
  for (const AuditCheck& c : checks) {
    if (c.name == check) return c;
  }
  throw std::out_of_range("AuditReport " + name + ": no check named " + check);
}

std::string AuditReport::to_json(int indent) const {
  nlohmann::ordered_json doc;
  doc["name"] = name;
  doc["pass"] = passed();
  doc["checks"] = nlohmann::ordered_json::array();
  for (const AuditCheck& c : checks) {
    doc["checks"].push_back(
        {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  doc["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metrics) doc["metrics"][key] = value;
  return doc.dump(indent);
}

EnergyResiduals energy_residuals(const EnergyLedger& ledger, const ModelParams& params) {
  if (ledger.empty()) throw ConfigError("audit_energy: empty ledger");
  using C = LedgerColumn;
  EnergyResiduals r;
  const double l2_0 = ledger.value(0, C::l2_sq);
  const double h1_0 = ledger.value(0, C::h1semi_sq);
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const double r1 = ledger.value(i, C::l2_sq) +
                      2.0 * params.kappa1 * ledger.integral(i, C::h1semi_sq) +
                      2.0 * params.kappa2 *
                          (ledger.integral(i, C::l2_sq) + params.mu * ledger.integral(i, C::l4_quart)) -
                      l2_0;
    const double r2 =
        ledger.value(i, C::h1semi_sq) + 2.0 * params.kappa1 * ledger.integral(i, C::lap_sq) - h1_0;
    r.residual1.push_back(r1);
    r.residual2.push_back(r2);
    r.defect2.push_back(r2 + 2.0 * params.kappa2 * ledger.integral(i, C::cubic_lap_pair));
  }
  return r;
}

AuditReport audit_energy(const EnergyLedger& ledger, const ModelParams& params, double dt,
                         const EnergyAuditOptions& options) {
  if (!(dt > 0.0)) throw ConfigError("audit_energy: dt must be positive");
  const EnergyResiduals r = energy_residuals(ledger, params);
  using C = LedgerColumn;
  const double l2_0 = ledger.value(0, C::l2_sq);
  const double scale = std::max(l2_0, ledger.value(0, C::h1semi_sq));
  const double tol = options.c_tol * dt * (1.0 + scale);

  const auto max_of = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  const auto max_abs_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double sup_l2 = 0.0;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    sup_l2 = std::max(sup_l2, std::sqrt(ledger.value(i, C::l2_sq)));
  }

  AuditReport report;
  report.name = "energy";
  report.add("residual_1", max_of(r.residual1), tol);
  report.add("residual_2", max_of(r.residual2), tol);
  report.add("sup_l2", sup_l2 - std::sqrt(l2_0), tol);
  report.metrics["tolerance_scale"] = scale;
  report.metrics["max_abs_residual_1"] = max_abs_of(r.residual1);
  report.metrics["max_abs_defect_2"] = max_abs_of(r.defect2);
  report.metrics["samples"] = static_cast<double>(ledger.size());
  return report;
}

AuditReport audit_nonlinear_bounds(const std::vector<std::pair<int, const EnergyLedger*>>& family,
                                   double eps) {
  if (family.size() < 2) throw ConfigError("audit_nonlinear_bounds: needs at least 2 mode counts");
  auto sorted = family;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  AuditReport report;
  report.name = "nonlinear_bounds";
  const LedgerColumn columns[] = {LedgerColumn::cross_l32_sq, LedgerColumn::cubic_l2_sq,
                                  LedgerColumn::f2_xnegbeta_sq, LedgerColumn::f3_l2_sq};
  for (LedgerColumn c : columns) {
    std::vector<double> values;
    for (const auto& [n, ledger] : sorted) {
      if (ledger == nullptr || ledger->empty()) {
        throw ConfigError("audit_nonlinear_bounds: empty ledger for n = " + std::to_string(n));
      }
      values.push_back(ledger->final_integral(c));
    }
    const std::size_t head = std::min<std::size_t>(3, values.size());
    const double bound = (1.0 + eps) * *std::max_element(values.begin(), values.begin() + head);
    const std::string name = "int_" + std::string(column_name(c));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string label = name + "@n=" + std::to_string(sorted[i].first);
      report.metrics[label] = values[i];
      report.add(label, values[i] - bound, 0.0);
    }
  }
  return report;
}

double holder_quotient(const Trajectory& trajectory, double alpha, const LpOptions& lp) {
  if (trajectory.size() < 2) throw ConfigError("holder_quotient: needs at least 2 samples");
  if (!(alpha > 0.0 && alpha <= 0.25)) throw ConfigError("holder_quotient: alpha must lie in (0, 1/4]");
  double best = 0.0;
  for (std::size_t j = 1; j < trajectory.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const SpectralField diff = trajectory.states[j] - trajectory.states[i];
      if (diff.coeffs().isZero(0.0)) continue;
      const double gap = trajectory.times[j] - trajectory.times[i];
      best = std::max(best, norm(diff, NormKind::l3_2(), lp) / std::pow(gap, alpha));
    }
  }
  return best;
}

double lipschitz_ratio(GalerkinMap map, const SpectralField& u, const SpectralField& v,
                       const ModelParams& params) {
  const double denom = (u - v).coeffs().norm();
  if (!(denom > 0.0)) throw ConfigError("lipschitz_ratio: degenerate pair u = v");
  return (apply_map(map, u, params) - apply_map(map, v, params)).coeffs().norm() / denom;
}

namespace {

SpectralField draw_in_ball(const BasisPtr& basis, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  SpectralField u(basis);
  for (Eigen::Index i = 0; i < u.coeffs().size(); ++i) u.coeffs().data()[i] = normal(rng);
  const double n = u.coeffs().norm();
  const double r = radius * uniform(rng);
  if (n > 0.0) u *= r / n;
  return u;
}

}  // namespace

LipschitzProbe lipschitz_probe(GalerkinMap map, const BasisPtr& basis, const ModelParams& params,
                               double ball_radius, int samples, std::uint64_t seed) {
  if (samples < 2) throw ConfigError("lipschitz_probe: samples must be >= 2");
  if (!(ball_radius > 0.0)) throw ConfigError("lipschitz_probe: ball radius must be positive");
  std::mt19937_64 rng(seed);
  LipschitzProbe out;
  for (int s = 0; s < samples; ++s) {
    const SpectralField u = draw_in_ball(basis, rng, ball_radius);
    const SpectralField v = draw_in_ball(basis, rng, ball_radius);
    if (!((u - v).coeffs().norm() > 0.0)) continue;
    out.max_ratio = std::max(out.max_ratio, lipschitz_ratio(map, u, v, params));
    ++out.pairs_used;
  }
  if (out.pairs_used == 0) throw NumericalError("lipschitz_probe: every sampled pair was degenerate");
  return out;
}

AuditReport projection_checks(const std::vector<SpectralField>& probes,
                              const std::vector<Eigen::Index>& ns, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("projection_checks: beta must be > 0");
  if (probes.empty() || ns.empty()) throw ConfigError("projection_checks: needs probes and mode counts");
  std::vector<Eigen::Index> sorted = ns;
  std::sort(sorted.begin(), sorted.end());

  double worst_neg = -std::numeric_limits<double>::infinity();
  double worst_l2 = -std::numeric_limits<double>::infinity();
  double worst_tail = -std::numeric_limits<double>::infinity();
  double last_tail = 0.0;
  for (const SpectralField& v : probes) {
    const double vn = norm(v, NormKind::x_neg_beta(beta));
    const double v2 = norm(v, NormKind::l2());
    const double scale_neg = std::max(1.0, vn);
    const double scale_l2 = std::max(1.0, v2);
    double previous_tail = std::numeric_limits<double>::infinity();
    for (Eigen::Index n : sorted) {
      if (n > v.modes()) throw ShapeError("projection_checks: n exceeds the probe basis");
      const SpectralField p = truncate_modes(v, n);
      worst_neg = std::max(worst_neg, (norm(p, NormKind::x_neg_beta(beta)) - vn) / scale_neg);
      worst_l2 = std::max(worst_l2, (norm(p, NormKind::l2()) - v2) / scale_l2);
      const double tail = norm(v - p, NormKind::x_beta(beta));
      if (std::isfinite(previous_tail)) {
        worst_tail = std::max(worst_tail, (tail - previous_tail) / std::max(1.0, previous_tail));
      }
      previous_tail = tail;
      last_tail = std::max(last_tail, tail);
    }
  }
  AuditReport report;
  report.name = "projection";
  // Residuals are relative to max(1, norm of the larger side).
  report.add("x_neg_beta_contraction", worst_neg, 1e-12);
  report.add("l2_contraction", worst_l2, 1e-12);
  if (sorted.size() > 1) report.add("x_beta_tail_monotone", worst_tail, 1e-12);
  report.metrics["beta"] = beta;
  report.metrics["largest_final_tail"] = last_tail;
  return report;
}

SpectralField random_field(const BasisPtr& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField u(basis);
  for (Eigen::Index i = 0; i < u.coeffs().size(); ++i) u.coeffs().data()[i] = normal(rng);
  return u;
}

std::vector<SpectralField> random_probes(const BasisPtr& basis, int count, std::uint64_t seed) {
  std::vector<SpectralField> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_field(basis, seed + static_cast<std::uint64_t>(i)));
  return out;
}

}  // namespace llb

#include "llb/convergence.hpp"

#include "llb/errors.hpp"
#include "llb/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

namespace llb {

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "n,n_next,d_C,d_Lp\n";
  for (const ConvergenceRow& r : rows) {
    out << r.n << ',' << r.n_next << ',' << format_double(r.d_C) << ',' << format_double(r.d_Lp)
        << '\n';
  }
}

bool ConvergenceTable::decreasing(double slack) const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].d_C <= (1.0 + slack) * rows[i - 1].d_C)) return false;
    if (!(rows[i].d_Lp <= (1.0 + slack) * rows[i - 1].d_Lp)) return false;
  }
  return true;
}

double default_beta_bar(int dim) { return std::max(1.0, dim / 6.0 + 0.5); }

ConvergenceTable cauchy_differences(const std::vector<Trajectory>& family,
                                    const ConvergenceOptions& options) {
  if (family.size() < 2) throw ConfigError("convergence_study: needs at least 2 mode counts");
  if (!(options.beta_bar > 0.0)) throw ConfigError("convergence_study: beta_bar must be > 0");
  if (!(options.p_bar >= 1.0)) throw ConfigError("convergence_study: p_bar must be >= 1");
  ConvergenceTable table;
  table.beta_bar = options.beta_bar;
  table.p_bar = options.p_bar;
  for (std::size_t f = 0; f + 1 < family.size(); ++f) {
    const Trajectory& a = family[f];
    const Trajectory& b = family[f + 1];
    if (!a.basis().nested_in(b.basis())) {
      throw ShapeError("convergence_study: basis " + std::to_string(f) + " is not nested in the next");
    }
    if (a.times.size() != b.times.size()) {
      throw ConfigError("convergence_study: trajectories were sampled at different times");
    }
    ConvergenceRow row;
    row.n = a.basis().modes_per_dim()[0];
    row.n_next = b.basis().modes_per_dim()[0];
    std::vector<double> lp(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, b.times[i])) {
        throw ConfigError("convergence_study: trajectories were sampled at different times");
      }
      const SpectralField diff = embed(a.states[i], b.basis_ptr()) - b.states[i];
      row.d_C = std::max(row.d_C, norm(diff, NormKind::x_neg_beta(options.beta_bar)));
      lp[i] = std::pow(norm(diff, NormKind::l4()), options.p_bar);
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
      integral += 0.5 * (a.times[i] - a.times[i - 1]) * (lp[i] + lp[i - 1]);
    }
    row.d_Lp = std::pow(integral, 1.0 / options.p_bar);
    table.rows.push_back(row);
  }
  return table;
}

ConvergenceTable convergence_study(const InitialCondition& u0, const DomainSpec& domain,
                                   const ModelParams& params, const SolverConfig& config,
                                   const std::vector<int>& mode_counts,
                                   const ConvergenceOptions& options) {
  if (mode_counts.size() < 2) throw ConfigError("convergence_study: needs at least 2 mode counts");
  for (std::size_t i = 1; i < mode_counts.size(); ++i) {
    if (mode_counts[i] <= mode_counts[i - 1]) {
      throw ConfigError("convergence_study: mode counts must increase strictly");
    }
  }
  std::vector<BasisPtr> bases;
  for (int n : mode_counts) bases.push_back(build_basis(domain, {n}));
  for (std::size_t i = 1; i < bases.size(); ++i) {
    if (!bases[i - 1]->nested_in(*bases[i])) throw ShapeError("convergence_study: bases are not nested");
  }
  params.validate();
  config.validate();
  for (const BasisPtr& b : bases) check_stability(config, *b, params);

  const auto solve = [&](const BasisPtr& basis) { return integrate(u0.project(basis), params, config); };
  std::vector<Trajectory> family;
  if (options.parallel) {
    std::vector<std::future<Trajectory>> jobs;
    for (const BasisPtr& b : bases) jobs.push_back(std::async(std::launch::async, solve, b));
    for (auto& j : jobs) family.push_back(j.get());
  } else {
    for (const BasisPtr& b : bases) family.push_back(solve(b));
  }
  return cauchy_differences(family, options);
}

}  // namespace llb

#pragma once

#include "llb/basis.hpp"
#include "llb/init.hpp"
#include "llb/integrator.hpp"
#include "llb/operators.hpp"

#include <iosfwd>
#include <vector>

namespace llb {

struct ConvergenceRow {
  int n = 0;
  int n_next = 0;
  double d_C = 0.0;
  double d_Lp = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double beta_bar = 1.0;
  double p_bar = 8.0;

  /// Header n,n_next,d_C,d_Lp.
  void write_csv(std::ostream& out) const;
  /// Each column satisfies d[i+1] <= (1 + slack) d[i].
  [[nodiscard]] bool decreasing(double slack) const;
};

/// Default X^{-beta} exponent for dimension d: max(1, d/6 + 1/2).
double default_beta_bar(int dim);

struct ConvergenceOptions {
  double beta_bar = 1.0;
  double p_bar = 8.0;
  /// Run the family members on separate threads.
  bool parallel = true;
};

/// Solves the same initial data in each S_n (modes per dimension from
/// `mode_counts`) and tabulates consecutive Cauchy differences:
///   d_C  = max_t |u_n(t) - u_n'(t)|_{X^{-beta_bar}}
///   d_Lp = (int_0^T |u_n - u_n'|_{L4}^{p_bar} dt)^{1/p_bar}
/// with the smaller field zero-padded into the larger basis.
ConvergenceTable convergence_study(const InitialCondition& u0, const DomainSpec& domain,
                                   const ModelParams& params, const SolverConfig& config,
                                   const std::vector<int>& mode_counts,
                                   const ConvergenceOptions& options = {});

/// The same differences for already computed trajectories.
ConvergenceTable cauchy_differences(const std::vector<Trajectory>& family,
                                    const ConvergenceOptions& options = {});

}  // namespace llb

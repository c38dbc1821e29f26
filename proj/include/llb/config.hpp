#pragma once

#include "llb/basis.hpp"
#include "llb/init.hpp"
#include "llb/integrator.hpp"
#include "llb/operators.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace llb {

/// Everything a batch run needs, parsed and validated up front.
struct RunConfig {
  DomainSpec domain;
  std::vector<int> modes_per_dim{16};
  ModelParams params;
  SolverConfig solver;
  InitialCondition u0;
  /// X^{-beta} exponent for the nonlinear bound columns.
  double beta = 1.0;
  double alpha = 0.25;
  double c_tol = 10.0;
  /// Test modes of the weak-form audit (leading modes of the basis).
  int weak_modes = 8;
  /// Refinement tolerance and point budget of the L3/2 ledger column and the
  /// Hölder quotient. The default tolerance loosens with the dimension.
  LpOptions lp;
  std::filesystem::path output_dir = "out";
  bool write_trajectory = false;
  std::filesystem::path source;

  [[nodiscard]] BasisPtr basis() const;
};

/// Flat "key = value" lines; '#' starts a comment. Keys:
///   domain.dim domain.lengths domain.bc domain.modes
///   model.kappa1 model.kappa2 model.gamma model.mu model.T model.Tc model.chi_par
///   solver.dt solver.t_end solver.scheme solver.record_every solver.adapt solver.adapt_tol
///   audit.beta audit.alpha audit.c_tol audit.weak_modes audit.lp_tol audit.lp_points
///   init.u0 output.dir output.trajectory
/// Errors are ConfigError "source:line: message". Relative paths resolve
/// against `base_dir`.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>",
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// 1e-8, 1e-6, 1e-4 for dimension 1, 2, 3.
double default_lp_tolerance(int dim);

/// Comma separated integers, e.g. "8,16,32".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace llb

#pragma once

#include "llb/field.hpp"
#include "llb/integrator.hpp"
#include "llb/operators.hpp"

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace llb {

/// Per-sample quantities, in CSV column order after `t`.
enum class LedgerColumn {
  l2_sq,           // ||u||^2_{L2}
  h1semi_sq,       // ||grad u||^2_{L2}
  lap_sq,          // ||Lap u||^2_{L2}
  l4_quart,        // ||u||^4_{L4}
  cross_l32_sq,    // ||u x Lap u||^2_{L3/2}
  cubic_l2_sq,     // ||(1 + mu |u|^2) u||^2_{L2}
  cubic_lap_pair,  // <Pi_n((1 + mu |u|^2) u), -Lap u>
  f2_xnegbeta_sq,  // ||Pi_n(u x Lap u)||^2_{X^{-beta}}
  f3_l2_sq,        // ||Pi_n((1 + mu |u|^2) u)||^2_{L2}
};
inline constexpr std::size_t kLedgerColumns = 9;
using LedgerValues = std::array<double, kLedgerColumns>;

std::string_view column_name(LedgerColumn c);

struct LedgerOptions {
  /// Exponent of the X^{-beta} column.
  double beta = 1.0;
  /// Refinement tolerance for the L^{3/2} column.
  LpOptions lp{1e-8, Eigen::Index{1} << 21};
};

LedgerValues ledger_values(const SpectralField& u, const ModelParams& params,
                           const LedgerOptions& options = {});

/// Time series of ledger values with cumulative trapezoid integrals.
class EnergyLedger {
 public:
  void append(double t, const LedgerValues& values);

  [[nodiscard]] bool empty() const { return times_.empty(); }
  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] double value(std::size_t row, LedgerColumn c) const {
    return values_[row][static_cast<std::size_t>(c)];
  }
  /// integral from 0 to times()[row].
  [[nodiscard]] double integral(std::size_t row, LedgerColumn c) const {
    return integrals_[row][static_cast<std::size_t>(c)];
  }
  [[nodiscard]] double final_integral(LedgerColumn c) const { return integral(size() - 1, c); }

  /// Header row, then one row per sample: t, the 9 values, the 9 integrals.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> times_;
  std::vector<LedgerValues> values_;
  std::vector<LedgerValues> integrals_;
};

/// Integrator observer that appends one ledger row per step.
StepObserver ledger_recorder(EnergyLedger& ledger, const ModelParams& params,
                             const LedgerOptions& options = {});

/// Convenience: integrate while recording the ledger.
Trajectory integrate_with_ledger(const SpectralField& u0, const ModelParams& params,
                                 const SolverConfig& config, EnergyLedger& ledger,
                                 const LedgerOptions& options = {});

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace llb

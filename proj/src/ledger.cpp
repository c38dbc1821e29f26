#include "llb/ledger.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace llb {

std::string_view column_name(LedgerColumn c) {
  switch (c) {
    case LedgerColumn::l2_sq:
      return "l2_sq";
    case LedgerColumn::h1semi_sq:
      return "h1semi_sq";
    case LedgerColumn::lap_sq:
      return "lap_sq";
    case LedgerColumn::l4_quart:
      return "l4_quart";
    case LedgerColumn::cross_l32_sq:
      return "cross_l32_sq";
    case LedgerColumn::cubic_l2_sq:
      return "cubic_l2_sq";
    case LedgerColumn::cubic_lap_pair:
      return "cubic_lap_pair";
    case LedgerColumn::f2_xnegbeta_sq:
      return "f2_xnegbeta_sq";
    case LedgerColumn::f3_l2_sq:
      return "f3_l2_sq";
  }
  return "?";
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), res.ptr);
}

LedgerValues ledger_values(const SpectralField& u, const ModelParams& params,
                           const LedgerOptions& options) {
  LedgerValues v{};
  const Basis& basis = u.basis();
  const SpectralField lap = laplacian(u);

  v[0] = u.coeffs().squaredNorm();
  v[1] = weighted_square_sum(u, 1.0);
  v[2] = lap.coeffs().squaredNorm();

  const double l4 = norm(u, NormKind::l4());
  v[3] = l4 * l4 * l4 * l4;

  const NodalEvaluator<double> cross = [&](const Quadrature& q) {
    return pointwise_cross(u.nodal(q), lap.nodal(q));
  };
  const double l32 = lp_norm_of(basis, cross, 1.5, 2, options.lp);
  v[4] = l32 * l32;

  const NodalEvaluator<double> cubic = [&](const Quadrature& q) {
    NodalMatrix<double> a = u.nodal(q);
    const Eigen::ArrayXd factor = 1.0 + params.mu * a.rowwise().squaredNorm().array();
    a.array().colwise() *= factor;
    return a;
  };
  const double c2 = lp_norm_of(basis, cubic, 2.0, 3, options.lp);
  v[5] = c2 * c2;

  const SpectralField f3 = cubic_term(u, params);
  v[6] = -inner(f3, lap);
  const double f2 = norm(cross_laplacian(u), NormKind::x_neg_beta(options.beta));
  v[7] = f2 * f2;
  v[8] = f3.coeffs().squaredNorm();

  // Analytically nonnegative; clear rounding-level negatives.
  for (double& x : v) {
    if (x < 0.0 && x > -1e-13) x = 0.0;
  }
  return v;
}

void EnergyLedger::append(double t, const LedgerValues& values) {
  if (!times_.empty() && !(t > times_.back())) {
    throw std::invalid_argument("EnergyLedger: times must increase strictly");
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("EnergyLedger: non-finite entry");
  }
  LedgerValues integral{};
  if (!times_.empty()) {
    const double h = t - times_.back();
    for (std::size_t c = 0; c < kLedgerColumns; ++c) {
      integral[c] = integrals_.back()[c] + 0.5 * h * (values_.back()[c] + values[c]);
    }
  }
  times_.push_back(t);
  values_.push_back(values);
  integrals_.push_back(integral);
}

void EnergyLedger::write_csv(std::ostream& out) const {
  out << "t";
  for (std::size_t c = 0; c < kLedgerColumns; ++c) {
    out << ',' << column_name(static_cast<LedgerColumn>(c));
  }
  for (std::size_t c = 0; c < kLedgerColumns; ++c) {
    out << ",int_" << column_name(static_cast<LedgerColumn>(c));
  }
  out << '\n';
  for (std::size_t r = 0; r < times_.size(); ++r) {
    out << format_double(times_[r]);
    for (double x : values_[r]) out << ',' << format_double(x);
    for (double x : integrals_[r]) out << ',' << format_double(x);
    out << '\n';
  }
}

StepObserver ledger_recorder(EnergyLedger& ledger, const ModelParams& params,
                             const LedgerOptions& options) {
  return [&ledger, params, options](std::size_t, double t, const SpectralField& u) {
    ledger.append(t, ledger_values(u, params, options));
  };
}

Trajectory integrate_with_ledger(const SpectralField& u0, const ModelParams& params,
                                 const SolverConfig& config, EnergyLedger& ledger,
                                 const LedgerOptions& options) {
  return integrate(u0, params, config, ledger_recorder(ledger, params, options));
}

}  // namespace llb

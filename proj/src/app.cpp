#include "llb/app.hpp"

#include "llb/config.hpp"
#include "llb/convergence.hpp"
#include "llb/errors.hpp"
#include "llb/init.hpp"
#include "llb/io.hpp"
#include "llb/ledger.hpp"
#include "llb/oracle.hpp"
#include "llb/weak_form.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace llb {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Maps the error hierarchy onto exit codes.
int guarded(const std::string& command, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << command << ": numerical failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const QuadratureError& e) {
    err << command << ": quadrature failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  fn(out);
  if (!out) throw NumericalError(path.string() + ": write failed");
}

json norms_json(const SpectralField& u, double t) {
  const double l2 = norm(u, NormKind::l2());
  const double l4 = norm(u, NormKind::l4());
  json j;
  j["t"] = t;
  j["l2_sq"] = l2 * l2;
  j["h1semi_sq"] = std::pow(norm(u, NormKind::h1_semi()), 2);
  j["l4_quart"] = std::pow(l4, 4);
  j["mean_sq"] = l2 * l2 / u.basis().domain().volume();
  return j;
}

double energy_scale(const SpectralField& u0) {
  return 1.0 + std::max(std::pow(norm(u0, NormKind::l2()), 2), std::pow(norm(u0, NormKind::h1_semi()), 2));
}

/// Every `stride`-th sample and the last one.
Trajectory thin(const Trajectory& t, std::size_t max_samples) {
  if (t.size() <= max_samples) return t;
  const std::size_t stride = (t.size() - 2) / (max_samples - 1) + 1;
  Trajectory out;
  out.params = t.params;
  out.config = t.config;
  out.steps = t.steps;
  for (std::size_t i = 0; i < t.size(); i += stride) {
    out.times.push_back(t.times[i]);
    out.states.push_back(t.states[i]);
  }
  if (out.times.back() != t.times.back()) {
    out.times.push_back(t.times.back());
    out.states.push_back(t.states.back());
  }
  return out;
}

AuditReport weak_form_report(const Trajectory& traj, int leading, double tolerance) {
  AuditReport r;
  r.name = "weak_form";
  const WeakResidualTable table(traj);
  const Eigen::Index k = std::min<Eigen::Index>(leading, traj.basis().size());
  r.add("max_abs_residual", table.max_abs(k), tolerance);
  r.metrics["test_modes"] = static_cast<double>(k);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- run

int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded("run", err, [&] {
    const RunConfig cfg = load_config(config_path);
    const BasisPtr basis = cfg.basis();
    check_stability(cfg.solver, *basis, cfg.params);
    for (const std::string& w : cfg.params.regime_warnings()) err << "run: warning: " << w << '\n';

    const SpectralField u0 = cfg.u0.project(basis);
    EnergyLedger ledger;
    LedgerOptions lopts;
    lopts.beta = cfg.beta;
    lopts.lp = cfg.lp;
    const Trajectory traj = integrate_with_ledger(u0, cfg.params, cfg.solver, ledger, lopts);

    std::vector<AuditReport> audits;
    EnergyAuditOptions eopts;
    eopts.c_tol = cfg.c_tol;
    audits.push_back(audit_energy(ledger, cfg.params, cfg.solver.dt, eopts));
    audits.push_back(weak_form_report(traj, cfg.weak_modes,
                                      cfg.c_tol * cfg.solver.dt * energy_scale(u0)));

    const Trajectory holder_samples = thin(traj, 256);
    const double holder = holder_quotient(holder_samples, cfg.alpha, cfg.lp);

    bool pass = true;
    for (const AuditReport& a : audits) pass = pass && a.passed();

    std::filesystem::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "ledger.csv", [&](std::ostream& o) { ledger.write_csv(o); });
    save_checkpoint(cfg.output_dir / "final.ckpt", traj.states.back(), traj.times.back());
    if (cfg.write_trajectory) save_trajectory(cfg.output_dir / "trajectory", traj);

    json summary;
    summary["config"] = config_path.filename().string();
    summary["dim"] = basis->dim();
    summary["bc"] = to_string(cfg.domain.bc);
    summary["modes"] = basis->size();
    summary["scheme"] = to_string(cfg.solver.scheme);
    summary["dt"] = cfg.solver.dt;
    summary["t_end"] = cfg.solver.t_end;
    summary["steps"] = traj.steps;
    summary["initial"] = norms_json(u0, 0.0);
    summary["final"] = norms_json(traj.states.back(), traj.times.back());
    summary["holder"] = {{"alpha", cfg.alpha},
                         {"quotient", holder},
                         {"samples", holder_samples.size()}};
    summary["warnings"] = traj.warnings;
    summary["audits"] = json::array();
    for (const AuditReport& a : audits) summary["audits"].push_back(json::parse(a.to_json()));
    summary["pass"] = pass;
    write_file(cfg.output_dir / "summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });

    out << "run: " << (pass ? "pass" : "FAIL") << " t=" << traj.times.back()
        << " mean|u|^2=" << format_double(summary["final"]["mean_sq"].get<double>())
        << " -> " << cfg.output_dir.string() << '\n';
    for (const AuditReport& a : audits) {
      for (const AuditCheck* c : a.failures()) {
        out << "  " << a.name << "." << c->name << ": residual " << format_double(c->residual)
            << " > tol " << format_double(c->tolerance) << '\n';
      }
    }
    return pass ? kExitPass : kExitFailure;
  });
}

// ---------------------------------------------------------------- verify

VerifyLevel parse_level(const std::string& name) {
  if (name == "quick") return VerifyLevel::quick;
  if (name == "full") return VerifyLevel::full;
  throw ConfigError("unknown verify level '" + name + "' (expected quick or full)");
}

namespace {

struct Battery {
  VerifyOptions options;
  std::ostream* log = nullptr;

  [[nodiscard]] bool full() const { return options.level == VerifyLevel::full; }

  SolverConfig solver(double dt, double t_end, Scheme scheme = Scheme::imex_euler, int every = 1) const {
    SolverConfig c;
    c.dt = dt;
    c.t_end = t_end;
    c.scheme = scheme;
    c.record_every = every;
    c.fault = options.fault;
    return c;
  }

  /// Records a failing check instead of aborting when a canned run breaks down.
  void attempt(AuditReport& r, const std::string& name, double tolerance,
               const std::function<double()>& fn) const {
    try {
      r.add(name, fn(), tolerance);
    } catch (const NumericalError& e) {
      r.add(name, kInf, tolerance);
      if (log) *log << "  " << r.name << "." << name << ": " << e.what() << '\n';
    } catch (const QuadratureError& e) {
      r.add(name, kInf, tolerance);
      if (log) *log << "  " << r.name << "." << name << ": " << e.what() << '\n';
    }
  }
};

BasisPtr line(int n, Boundary bc = Boundary::neumann) {
  DomainSpec d;
  d.bc = bc;
  return build_basis(d, {n});
}

SpectralField constant(const BasisPtr& b, const Eigen::Vector3d& v) {
  return InitialCondition::constant(v).project(b);
}

double mean_sq(const SpectralField& u) {
  return std::pow(norm(u, NormKind::l2()), 2) / u.basis().domain().volume();
}

/// Smooth random data shared by the energy, weak-form and bound audits.
InitialCondition smooth_data() { return InitialCondition::random(7, 2.0); }

SpectralField two_mode_field(const BasisPtr& b) {
  SpectralField u(b);
  u.coeffs()(1, 0) = 1.0;
  u.coeffs()(std::min<Eigen::Index>(3, b->size() - 1), 1) = 0.5;
  u.coeffs()(0, 2) = 0.3;
  return u;
}

AuditReport oracle_report(const Battery& bt) {
  AuditReport r;
  r.name = "oracle";
  const ModelParams p;
  const double exact_sq = std::pow(oracle::constant_field_exact(1.0, p, 0.5), 2);
  r.add("bernoulli_closed_form",
        std::abs(exact_sq - std::pow(oracle::constant_field_reference(1.0, p, 0.5), 2)), 1e-12);

  const BasisPtr b4 = line(4);
  bt.attempt(r, "bernoulli_rk4", 1e-10, [&] {
    const Trajectory t = integrate(constant(b4, {1, 0, 0}), p, bt.solver(1e-3, 0.5, Scheme::rk4, 500));
    return std::abs(mean_sq(t.states.back()) - exact_sq);
  });
  bt.attempt(r, "bernoulli_imex_halving", 0.4, [&] {
    const auto error = [&](double dt) {
      const Trajectory t = integrate(constant(b4, {1, 0, 0}), p, bt.solver(dt, 0.5, Scheme::imex_euler, 1000));
      return std::abs(mean_sq(t.states.back()) - exact_sq);
    };
    return std::abs(error(1e-3) / error(5e-4) - 2.0);
  });
  bt.attempt(r, "single_mode_rk4", 1e-10, [&] {
    ModelParams q;
    q.mu = 0.0;
    SpectralField u(b4);
    u.coeffs()(1, 0) = 1.0;
    const Trajectory t = integrate(u, q, bt.solver(1e-3, 1.0, Scheme::rk4, 1000));
    return std::abs(t.states.back().coeffs()(1, 0) - std::exp(-2.0));
  });

  std::vector<BasisPtr> bases{line(8), line(8, Boundary::dirichlet)};
  if (bt.full()) {
    DomainSpec d2;
    d2.dim = 2;
    d2.bc = Boundary::dirichlet;
    bases.push_back(build_basis(d2, {4}));
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const SpectralField u = two_mode_field(bases[i]) + 0.2 * random_field(bases[i], 40 + i);
    const std::string tag = "[" + std::to_string(i) + "]";
    r.add("cross_laplacian_dense" + tag,
          (cross_laplacian(u) - oracle::dense_cross_laplacian(u)).coeffs().cwiseAbs().maxCoeff(), 1e-10);
    r.add("cubic_term_dense" + tag,
          (cubic_term(u, p) - oracle::dense_cubic_term(u, p)).coeffs().cwiseAbs().maxCoeff(), 1e-10);
  }

  bt.attempt(r, "fd_constant", 1e-12, [&] {
    const auto fd = oracle::fd_reference([](const oracle::Point&) { return Eigen::Vector3d(1, 0, 0); },
                                         b4->domain(), p, {16, 1, 1}, 1e-3, 0.5, 500);
    const Trajectory t = integrate(constant(b4, {1, 0, 0}), p, bt.solver(1e-3, 0.5, Scheme::imex_euler, 500));
    return oracle::l2_distance(t.states.back(), fd, fd.states.size() - 1);
  });
  return r;
}

void append_prefixed(AuditReport& into, const AuditReport& from, const std::string& prefix) {
  for (const AuditCheck& c : from.checks) into.add(prefix + c.name, c.residual, c.tolerance);
  for (const auto& [k, v] : from.metrics) into.metrics[prefix + k] = v;
}

AuditReport projection_report(const Battery& bt) {
  AuditReport r;
  r.name = "projection";
  const BasisPtr b = line(bt.full() ? 64 : 32);
  const std::vector<SpectralField> probes = random_probes(b, 100, 11);
  for (double beta : {0.5, 1.0, 2.0}) {
    append_prefixed(r, projection_checks(probes, {4, 8, 16}, beta), "beta=" + format_double(beta) + ":");
  }
  // c_k = (1 + lambda_k)^{-1} has a finite X^{1/2} norm; its tail must shrink.
  const BasisPtr big = line(bt.full() ? 4096 : 1024);
  SpectralField x(big);
  x.coeffs().col(0) = (1.0 + big->eigenvalues().array()).inverse().matrix();
  append_prefixed(r, projection_checks({x}, {16, 32, 64, 128, 256}, 0.5), "decaying:");
  return r;
}

AuditReport lipschitz_report(const Battery& bt) {
  AuditReport r;
  r.name = "lipschitz";
  const BasisPtr b = line(16);
  const ModelParams p;
  const int samples = bt.full() ? 200 : 50;
  const double lmax = b->lambda_max();

  const LipschitzProbe f1 = lipschitz_probe(GalerkinMap::laplacian, b, p, 1.0, samples, 3);
  r.add("f1_below_lambda_max", f1.max_ratio - lmax, 1e-12 * lmax);
  r.add("f1_below_lambda_sum", f1.max_ratio - b->lambda_sum(), 0.0);
  SpectralField top(b);
  top.coeffs()(b->size() - 1, 0) = 1.0;
  r.add("f1_top_mode_equality",
        std::abs(lipschitz_ratio(GalerkinMap::laplacian, top, SpectralField(b), p) - lmax), 1e-12 * lmax);

  ModelParams linear = p;
  linear.mu = 0.0;
  r.add("f3_linear_unit_ratio",
        std::abs(lipschitz_probe(GalerkinMap::cubic, b, linear, 10.0, samples, 3).max_ratio - 1.0), 1e-12);

  for (GalerkinMap map : {GalerkinMap::cross_laplacian, GalerkinMap::cubic}) {
    double prev = 0.0;
    for (double radius : {1.0, 3.0, 10.0}) {
      const double ratio = lipschitz_probe(map, b, p, radius, samples, 3).max_ratio;
      r.metrics[to_string(map) + "@R=" + format_double(radius)] = ratio;
      if (prev > 0.0) r.add(to_string(map) + "_grows_to_R=" + format_double(radius), prev - ratio, 0.0);
      prev = ratio;
    }
  }
  return r;
}

AuditReport orthogonality_report(const Battery& bt) {
  AuditReport r;
  r.name = "orthogonality";
  std::vector<BasisPtr> bases{line(32)};
  if (bt.full()) {
    DomainSpec d2;
    d2.dim = 2;
    bases.push_back(build_basis(d2, {8}));
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const SpectralField u = random_field(bases[i], 500 + s);
      worst = std::max(worst, std::abs(inner(cross_laplacian(u), u)) / std::pow(norm(u, NormKind::h1()), 2));
    }
    r.add("cross_term_pairing[" + std::to_string(i) + "]", worst, 1e-10);
  }
  return r;
}

/// Energy and weak-form audits of one canned run at dt and dt/2.
std::vector<AuditReport> energy_reports(const Battery& bt) {
  AuditReport energy;
  energy.name = "energy";
  AuditReport weak;
  weak.name = "weak_form";
  const int n = bt.full() ? 32 : 16;
  const double dt = bt.full() ? 1e-3 : 2e-3;
  // Short enough that a wrong-sign cubic term shows up as a positive residual
  // rather than a blow-up.
  const double t_end = bt.full() ? 1.0 : 0.2;
  const BasisPtr b = line(n);
  const ModelParams p;
  const SpectralField u0 = smooth_data().project(b);

  struct Run {
    EnergyLedger ledger;
    Trajectory traj;
  };
  std::vector<Run> runs;
  try {
    for (double h : {dt, dt / 2}) {
      Run run;
      run.traj = integrate_with_ledger(u0, p, bt.solver(h, t_end), run.ledger);
      runs.push_back(std::move(run));
    }
  } catch (const NumericalError& e) {
    energy.add("integrate", kInf, 0.0);
    weak.add("integrate", kInf, 0.0);
    if (bt.log) *bt.log << "  energy.integrate: " << e.what() << '\n';
    return {energy, weak};
  }

  const AuditReport coarse = audit_energy(runs[0].ledger, p, dt);
  const AuditReport fine = audit_energy(runs[1].ledger, p, dt / 2);
  append_prefixed(energy, coarse, "");
  energy.add("residual_1_halving",
             std::abs(coarse.metrics.at("max_abs_residual_1") / fine.metrics.at("max_abs_residual_1") - 2.0), 0.4);
  energy.add("defect_2_halving",
             std::abs(coarse.metrics.at("max_abs_defect_2") / fine.metrics.at("max_abs_defect_2") - 2.0), 0.4);

  const WeakResidualTable wc(runs[0].traj);
  const WeakResidualTable wf(runs[1].traj);
  const Eigen::Index k = std::min<Eigen::Index>(8, b->size());
  weak.add("max_abs_residual", wc.max_abs(k), 10.0 * dt);
  weak.add("halving", std::abs(wc.max_abs(k) / wf.max_abs(k) - 2.0), 0.4);
  return {energy, weak};
}

AuditReport nonlinear_report(const Battery& bt) {
  AuditReport r;
  r.name = "nonlinear_bounds";
  const std::vector<int> ns = bt.full() ? std::vector<int>{16, 32, 64, 128} : std::vector<int>{8, 16, 32};
  const double dt = bt.full() ? 1e-3 : 2e-3;
  const double t_end = bt.full() ? 1.0 : 0.5;
  std::vector<EnergyLedger> ledgers(ns.size());
  try {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      integrate_with_ledger(smooth_data().project(line(ns[i])), ModelParams{}, bt.solver(dt, t_end), ledgers[i]);
    }
  } catch (const NumericalError& e) {
    r.add("integrate", kInf, 0.0);
    if (bt.log) *bt.log << "  nonlinear_bounds.integrate: " << e.what() << '\n';
    return r;
  }
  std::vector<std::pair<int, const EnergyLedger*>> family;
  for (std::size_t i = 0; i < ns.size(); ++i) family.emplace_back(ns[i], &ledgers[i]);
  return audit_nonlinear_bounds(family);
}

AuditReport convergence_report(const Battery& bt) {
  AuditReport r;
  r.name = "convergence";
  try {
    const ConvergenceTable table = convergence_study(smooth_data(), DomainSpec{}, ModelParams{},
                                                     bt.solver(1e-3, 1.0, Scheme::imex_euler, 10), {8, 16, 32, 64});
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const ConvergenceRow& row = table.rows[i];
      const std::string tag = "@n=" + std::to_string(row.n);
      r.metrics["d_C" + tag] = row.d_C;
      r.metrics["d_Lp" + tag] = row.d_Lp;
      if (i == 0) continue;
      const ConvergenceRow& prev = table.rows[i - 1];
      r.add("d_C_decreases" + tag, row.d_C - 1.1 * prev.d_C, 0.0);
      r.add("d_Lp_decreases" + tag, row.d_Lp - 1.1 * prev.d_Lp, 0.0);
    }
  } catch (const NumericalError& e) {
    r.add("integrate", kInf, 0.0);
    if (bt.log) *bt.log << "  convergence.integrate: " << e.what() << '\n';
  }
  return r;
}

AuditReport holder_report(const Battery& bt) {
  AuditReport r;
  r.name = "holder";
  bt.attempt(r, "relative_change", 0.05, [&] {
    const SpectralField u0 = smooth_data().project(line(32));
    const double coarse = holder_quotient(integrate(u0, ModelParams{}, bt.solver(1e-3, 1.0, Scheme::imex_euler, 20)), 0.25);
    const double fine = holder_quotient(integrate(u0, ModelParams{}, bt.solver(1e-3, 1.0, Scheme::imex_euler, 10)), 0.25);
    r.metrics["quotient_coarse"] = coarse;
    r.metrics["quotient_fine"] = fine;
    return std::abs(fine - coarse) / coarse;
  });
  return r;
}

/// Smooth two-mode data with non-parallel components.
Eigen::Vector3d cross_method_data(const oracle::Point& x) {
  return {0.6 * std::cos(x[0]), 0.5 * std::cos(2.0 * x[0]), 0.4};
}

AuditReport cross_method_report(const Battery& bt) {
  AuditReport r;
  r.name = "cross_method";
  bt.attempt(r, "l2_difference@h=pi/256", 1e-3, [&] {
    const BasisPtr b = line(64);
    const ModelParams p;
    const double dt = 1e-4;
    const Trajectory t = integrate(oracle::dense_project(cross_method_data, b), p, bt.solver(dt, 0.5, Scheme::imex_euler, 5000));
    std::vector<double> errors;
    for (int cells : {64, 128, 256}) {
      const auto fd = oracle::fd_reference(cross_method_data, b->domain(), p, {cells, 1, 1}, dt, 0.5, 5000);
      errors.push_back(oracle::l2_distance(t.states.back(), fd, fd.states.size() - 1));
      r.metrics["l2_difference@cells=" + std::to_string(cells)] = errors.back();
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
      r.add("second_order@cells=" + std::to_string(64 << i), std::abs(std::log2(errors[i - 1] / errors[i]) - 2.0), 0.3);
    }
    return errors.back();
  });
  return r;
}

}  // namespace

std::vector<AuditReport> verify_battery(const VerifyOptions& options, std::ostream* progress) {
  Battery bt{options, progress};
  std::vector<AuditReport> reports;
  reports.push_back(oracle_report(bt));
  reports.push_back(projection_report(bt));
  reports.push_back(lipschitz_report(bt));
  reports.push_back(orthogonality_report(bt));
  for (AuditReport& r : energy_reports(bt)) reports.push_back(std::move(r));
  reports.push_back(nonlinear_report(bt));
  if (bt.full()) {
    reports.push_back(convergence_report(bt));
    reports.push_back(holder_report(bt));
    reports.push_back(cross_method_report(bt));
  }
  return reports;
}

int verify_command(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  return guarded("verify", err, [&] {
    const std::vector<AuditReport> reports = verify_battery(options, &err);
    if (!options.output_dir.empty()) std::filesystem::create_directories(options.output_dir);
    int failed = 0;
    for (const AuditReport& r : reports) {
      const bool ok = r.passed();
      failed += ok ? 0 : 1;
      out << (ok ? "PASS " : "FAIL ") << r.name << " (" << r.checks.size() << " checks)\n";
      for (const AuditCheck* c : r.failures()) {
        out << "  " << c->name << ": residual " << format_double(c->residual) << " > tol "
            << format_double(c->tolerance) << '\n';
      }
      if (!options.output_dir.empty()) {
        write_file(options.output_dir / (r.name + ".json"), [&](std::ostream& o) { o << r.to_json() << '\n'; });
      }
    }
    out << "verify " << (options.level == VerifyLevel::full ? "full" : "quick") << ": "
        << reports.size() - failed << "/" << reports.size() << " reports pass\n";
    return failed == 0 ? kExitPass : kExitFailure;
  });
}

// ---------------------------------------------------------------- converge

int converge_command(const std::filesystem::path& config_path, const ConvergeOptions& options,
                     std::ostream& out, std::ostream& err) {
  return guarded("converge", err, [&] {
    if (options.modes.size() < 2) throw ConfigError("--modes needs at least two mode counts");
    const RunConfig cfg = load_config(config_path);
    DomainSpec domain = cfg.domain;
    check_stability(cfg.solver, *build_basis(domain, {options.modes.back()}), cfg.params);

    ConvergenceOptions copts;
    copts.beta_bar = options.beta_bar.value_or(default_beta_bar(domain.dim));
    copts.p_bar = options.p_bar;
    if (!(copts.beta_bar > 0.0)) throw ConfigError("--beta-bar must be positive");
    if (!(copts.p_bar >= 1.0)) throw ConfigError("--p-bar must be >= 1");
    const ConvergenceTable table = convergence_study(cfg.u0, domain, cfg.params, cfg.solver, options.modes, copts);

    std::filesystem::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "convergence.csv", [&](std::ostream& o) { table.write_csv(o); });
    table.write_csv(out);
    const bool ok = table.decreasing(options.slack);
    if (!ok) err << "converge: Cauchy differences do not decrease within " << options.slack * 100 << "% slack\n";
    return ok ? kExitPass : kExitFailure;
  });
}

// ---------------------------------------------------------------- probe

int probe_command(const std::string& map_name, const ProbeOptions& options, std::ostream& out,
                  std::ostream& err) {
  return guarded("probe", err, [&] {
    const GalerkinMap map = parse_map(map_name);
    BasisPtr basis;
    ModelParams params;
    if (!options.config.empty()) {
      const RunConfig cfg = load_config(options.config);
      basis = cfg.basis();
      params = cfg.params;
    } else {
      if (options.modes < 1) throw ConfigError("--modes must be >= 1");
      basis = line(options.modes);
    }
    const LipschitzProbe probe = lipschitz_probe(map, basis, params, options.ball, options.samples, options.seed);
    json j;
    j["map"] = to_string(map);
    j["ball"] = options.ball;
    j["samples"] = options.samples;
    j["seed"] = options.seed;
    j["modes"] = basis->size();
    j["lambda_max"] = basis->lambda_max();
    j["lambda_sum"] = basis->lambda_sum();
    j["max_ratio"] = probe.max_ratio;
    j["pairs_used"] = probe.pairs_used;
    bool ok = true;
    if (map == GalerkinMap::laplacian) ok = probe.max_ratio <= basis->lambda_max() * (1.0 + 1e-12);
    j["pass"] = ok;
    out << j.dump() << '\n';
    return ok ? kExitPass : kExitFailure;
  });
}

}  // namespace llb

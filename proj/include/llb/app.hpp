#pragma once

#include "llb/audit.hpp"
#include "llb/integrator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace llb {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// ledger.csv, summary.json, final.ckpt (and trajectory/ when enabled) in
/// the configured output directory.
int run_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

enum class VerifyLevel { quick, full };
VerifyLevel parse_level(const std::string& name);

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  Fault fault = Fault::none;
  /// One <report>.json per audit when set.
  std::filesystem::path output_dir;
};

/// The built-in battery: oracle agreement, projection, Lipschitz,
/// orthogonality, energy, weak form and nonlinear bounds; `full` adds
/// convergence, Hölder and cross-method reports and larger problems.
std::vector<AuditReport> verify_battery(const VerifyOptions& options, std::ostream* progress = nullptr);
int verify_command(const VerifyOptions& options, std::ostream& out, std::ostream& err);

struct ConvergeOptions {
  std::vector<int> modes;
  std::optional<double> beta_bar;
  double p_bar = 8.0;
  double slack = 0.1;
};

/// Writes convergence.csv into the config's output directory.
int converge_command(const std::filesystem::path& config, const ConvergeOptions& options,
                     std::ostream& out, std::ostream& err);

struct ProbeOptions {
  double ball = 1.0;
  int samples = 100;
  std::uint64_t seed = 0;
  /// Domain, model and mode count come from here when set.
  std::filesystem::path config;
  int modes = 32;
};

/// Prints a JSON line with the empirical Lipschitz ratio of one map.
int probe_command(const std::string& map, const ProbeOptions& options, std::ostream& out,
                  std::ostream& err);

}  // namespace llb

#pragma once

#include "llb/field.hpp"
#include "llb/integrator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace llb {

struct Checkpoint {
  SpectralField field;
  double time = 0.0;
};

/// Self-describing text form:
///
///   llb-checkpoint 1
///   dim 1
///   bc neumann
///   lengths 3.141592653589793
///   modes_per_dim 32
///   quad_points 65
///   time 0.5
///   coefficients 32
///   0 : cx cy cz          (one line per mode, in mode order)
///
/// Doubles use the shortest round-trip representation, so a write/read cycle
/// is bit-exact.
void write_checkpoint(std::ostream& out, const SpectralField& u, double time);
Checkpoint read_checkpoint(std::istream& in, const std::string& source = "<stream>");

void save_checkpoint(const std::filesystem::path& path, const SpectralField& u, double time);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Directory with manifest.csv (index,t,file) and one checkpoint per sample.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& trajectory);
/// Times and states only; params and config are not stored.
Trajectory load_trajectory(const std::filesystem::path& dir);

std::string to_string(Boundary bc);
Boundary parse_boundary(const std::string& name);

}  // namespace llb

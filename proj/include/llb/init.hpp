#pragma once

#include "llb/field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace llb {

/// Initial data, independent of the mode count so that the same u0 can be
/// projected into every S_n of a convergence family.
struct InitialCondition {
  enum class Kind { zero, constant, modes, random, checkpoint };

  Kind kind = Kind::zero;
  Eigen::Vector3d vector = Eigen::Vector3d::Zero();
  std::vector<std::pair<ModeIndex, Eigen::Vector3d>> modes;
  std::uint64_t seed = 0;
  double decay = 1.0;
  std::optional<SpectralField> field;
  std::string text;

  static InitialCondition zero();
  static InitialCondition constant(const Eigen::Vector3d& v);
  static InitialCondition from_modes(std::vector<std::pair<ModeIndex, Eigen::Vector3d>> modes);
  /// c_k = xi_k (1 + lambda_k)^{-decay} with xi_k standard normal, seeded per
  /// (seed, k) so coefficients do not depend on the basis size.
  static InitialCondition random(std::uint64_t seed, double decay);
  static InitialCondition from_field(SpectralField u);

  /// zero | constant:x,y,z | modes:<file> | random:<seed>,<decay> | <checkpoint path>.
  /// Relative paths resolve against `base_dir`; files are read immediately.
  static InitialCondition parse(const std::string& preset, int dim,
                                const std::filesystem::path& base_dir = {});

  /// L2 projection of the initial data onto span(basis).
  [[nodiscard]] SpectralField project(const BasisPtr& basis) const;
};

/// Lines "k0 [k1 k2] cx cy cz"; '#' starts a comment.
std::vector<std::pair<ModeIndex, Eigen::Vector3d>> read_mode_file(const std::filesystem::path& path,
                                                                  int dim);

}  // namespace llb

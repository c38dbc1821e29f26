#include "llb/init.hpp"

#include "llb/errors.hpp"
#include "llb/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace llb {

InitialCondition InitialCondition::zero() {
  InitialCondition ic;
  ic.text = "zero";
  return ic;
}

InitialCondition InitialCondition::constant(const Eigen::Vector3d& v) {
  InitialCondition ic;
  ic.kind = Kind::constant;
  ic.vector = v;
  std::ostringstream ss;
  ss << "constant:" << v(0) << ',' << v(1) << ',' << v(2);
  ic.text = ss.str();
  return ic;
}

InitialCondition InitialCondition::from_modes(std::vector<std::pair<ModeIndex, Eigen::Vector3d>> modes) {
  InitialCondition ic;
  ic.kind = Kind::modes;
  ic.modes = std::move(modes);
  ic.text = "modes";
  return ic;
}

InitialCondition InitialCondition::random(std::uint64_t seed, double decay) {
  if (!std::isfinite(decay)) throw ConfigError("random initial data: decay must be finite");
  InitialCondition ic;
  ic.kind = Kind::random;
  ic.seed = seed;
  ic.decay = decay;
  ic.text = "random:" + std::to_string(seed) + "," + std::to_string(decay);
  return ic;
}

InitialCondition InitialCondition::from_field(SpectralField u) {
  InitialCondition ic;
  ic.kind = Kind::checkpoint;
  ic.field = std::move(u);
  ic.text = "checkpoint";
  return ic;
}

namespace {

double to_double(const std::string& token, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": bad number '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

std::vector<std::pair<ModeIndex, Eigen::Vector3d>> read_mode_file(const std::filesystem::path& path,
                                                                  int dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read mode file " + path.string());
  std::vector<std::pair<ModeIndex, Eigen::Vector3d>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(number);
    if (static_cast<int>(tokens.size()) != dim + 3) {
      throw ConfigError(where + ": expected " + std::to_string(dim) + " wave numbers and 3 components");
    }
    ModeIndex k;
    for (int j = 0; j < dim; ++j) {
      int v = 0;
      const auto res = std::from_chars(tokens[j].data(), tokens[j].data() + tokens[j].size(), v);
      if (res.ec != std::errc() || res.ptr != tokens[j].data() + tokens[j].size() || v < 0) {
        throw ConfigError(where + ": bad wave number '" + tokens[j] + "'");
      }
      k.k[j] = v;
    }
    Eigen::Vector3d c;
    for (int j = 0; j < 3; ++j) c(j) = to_double(tokens[dim + j], where);
    out.emplace_back(k, c);
  }
  return out;
}

InitialCondition InitialCondition::parse(const std::string& preset, int dim,
                                         const std::filesystem::path& base_dir) {
  InitialCondition ic;
  if (preset == "zero") {
    ic = zero();
  } else if (preset.starts_with("constant:")) {
    const auto parts = split(preset.substr(9), ',');
    if (parts.size() != 3) throw ConfigError("constant initial data needs 3 components: " + preset);
    ic = constant({to_double(parts[0], "constant"), to_double(parts[1], "constant"),
                   to_double(parts[2], "constant")});
  } else if (preset.starts_with("modes:")) {
    ic = from_modes(read_mode_file(resolve(preset.substr(6), base_dir), dim));
  } else if (preset.starts_with("random:")) {
    const auto parts = split(preset.substr(7), ',');
    if (parts.size() != 2) throw ConfigError("random initial data is random:<seed>,<decay>: " + preset);
    std::uint64_t seed = 0;
    const auto res = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), seed);
    if (res.ec != std::errc() || res.ptr != parts[0].data() + parts[0].size()) {
      throw ConfigError("random initial data: bad seed '" + parts[0] + "'");
    }
    ic = random(seed, to_double(parts[1], "random decay"));
  } else if (!preset.empty()) {
    Checkpoint c = load_checkpoint(resolve(preset, base_dir));
    if (c.field.basis().dim() != dim) throw ConfigError("checkpoint dimension does not match the domain");
    ic = from_field(std::move(c.field));
  } else {
    throw ConfigError("empty initial condition");
  }
  ic.text = preset;
  return ic;
}

namespace {

double integral_of_basis_function(const Basis& basis, const ModeIndex& k) {
  double v = 1.0;
  for (int j = 0; j < basis.dim(); ++j) {
    const double length = basis.domain().lengths[j];
    v *= std::sqrt(length) * trig::overlap(Family::cosine, 0, basis.family(), k.k[j], length);
  }
  return v;
}

Eigen::Vector3d random_coefficient(std::uint64_t seed, const ModeIndex& k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k.k[0]), static_cast<std::uint32_t>(k.k[1]),
                    static_cast<std::uint32_t>(k.k[2])};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::Vector3d c;
  for (int j = 0; j < 3; ++j) c(j) = normal(rng);
  return c;
}

}  // namespace

SpectralField InitialCondition::project(const BasisPtr& basis) const {
  SpectralField u(basis);
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::constant:
      for (Eigen::Index m = 0; m < basis->size(); ++m) {
        const double w = integral_of_basis_function(*basis, basis->mode(m));
        if (w != 0.0) u.coeffs().row(m) = w * vector.transpose();
      }
      break;
    case Kind::modes:
      for (const auto& [k, c] : modes) {
        if (const auto m = basis->find(k)) u.coeffs().row(*m) += c.transpose();
      }
      break;
    case Kind::random:
      for (Eigen::Index m = 0; m < basis->size(); ++m) {
        const double w = std::pow(1.0 + basis->eigenvalues()(m), -decay);
        u.coeffs().row(m) = w * random_coefficient(seed, basis->mode(m)).transpose();
      }
      break;
    case Kind::checkpoint: {
      const SpectralField& f = *field;
      if (f.basis().same_as(*basis)) return SpectralField(basis, f.coeffs());
      if (f.basis().nested_in(*basis)) return embed(f, basis);
      if (basis->nested_in(f.basis())) return restrict_to(f, basis);
      throw ShapeError("checkpoint basis and run basis are not nested");
    }
  }
  return u;
}

}  // namespace llb

#include "llb/operators.hpp"

#include <cmath>

namespace llb {

ModelParams ModelParams::from_temperature(double kappa1, double gamma, double temperature,
                                          double curie_temperature, double chi_parallel) {
  ModelParams p;
  p.kappa1 = kappa1;
  p.gamma = gamma;
  p.provenance = Provenance{temperature, curie_temperature, chi_parallel};
  if (!(curie_temperature > 0.0) || !(temperature > curie_temperature)) {
    throw ConfigError("temperature provenance needs T > T_c > 0");
  }
  if (!(chi_parallel > 0.0)) throw ConfigError("chi_par must be positive");
  p.kappa2 = kappa1 / chi_parallel;
  p.mu = 3.0 * temperature / (5.0 * (temperature - curie_temperature));
  p.validate();
  return p;
}

void ModelParams::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(kappa1) || !finite(kappa2) || !finite(gamma) || !finite(mu)) {
    throw ConfigError("model parameters must be finite");
  }
  if (!(kappa1 > 0.0)) throw ConfigError("kappa1 must be positive");
  if (kappa2 < 0.0) throw ConfigError("kappa2 must be nonnegative");
  if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
  if (mu < 0.0) throw ConfigError("mu must be nonnegative");
  if (provenance) {
    const Provenance& pr = *provenance;
    if (!(pr.curie_temperature > 0.0) || !(pr.temperature > pr.curie_temperature)) {
      throw ConfigError("temperature provenance needs T > T_c > 0");
    }
    if (!(pr.chi_parallel > 0.0)) throw ConfigError("chi_par must be positive");
    const double k2 = kappa1 / pr.chi_parallel;
    const double m = 3.0 * pr.temperature / (5.0 * (pr.temperature - pr.curie_temperature));
    const auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    };
    if (!close(kappa2, k2)) throw ConfigError("kappa2 does not match kappa1 / chi_par");
    if (!close(mu, m)) throw ConfigError("mu does not match 3T / (5 (T - Tc))");
  }
}

std::vector<std::string> ModelParams::regime_warnings() const {
  std::vector<std::string> out;
  if (kappa2 == 0.0) out.emplace_back("kappa2 = 0: outside the positive-coefficient regime");
  if (gamma == 0.0) out.emplace_back("gamma = 0: outside the positive-coefficient regime");
  if (mu == 0.0) out.emplace_back("mu = 0: outside the positive-coefficient regime");
  return out;
}

GalerkinMap parse_map(const std::string& name) {
  if (name == "F1" || name == "f1" || name == "laplacian") return GalerkinMap::laplacian;
  if (name == "F2" || name == "f2" || name == "cross") return GalerkinMap::cross_laplacian;
  if (name == "F3" || name == "f3" || name == "cubic") return GalerkinMap::cubic;
  throw ConfigError("unknown map '" + name + "' (expected F1, F2 or F3)");
}

std::string to_string(GalerkinMap map) {
  switch (map) {
    case GalerkinMap::laplacian:
      return "F1";
    case GalerkinMap::cross_laplacian:
      return "F2";
    case GalerkinMap::cubic:
      return "F3";
  }
  return "?";
}

}  // namespace llb

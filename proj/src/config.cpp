#include "llb/config.hpp"

#include "llb/errors.hpp"
#include "llb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace llb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw ConfigError("bad number '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("bad integer '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad boolean '" + text + "'");
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split_commas(text)) out.push_back(parse_int(item));
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

double default_lp_tolerance(int dim) { return dim <= 1 ? 1e-8 : dim == 2 ? 1e-6 : 1e-4; }

BasisPtr RunConfig::basis() const { return build_basis(domain, modes_per_dim); }

RunConfig parse_config(std::istream& in, const std::string& source,
                       const std::filesystem::path& base_dir) {
  const auto fail = [&](int line, const std::string& msg) -> ConfigError {
    if (line == 0) return ConfigError(source + ": " + msg);
    return ConfigError(source + ":" + std::to_string(line) + ": " + msg);
  };

  std::map<std::string, Entry> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw fail(line_no, "missing key");
    if (value.empty()) throw fail(line_no, "missing value for '" + key + "'");
    if (entries.contains(key)) {
      throw fail(line_no, "duplicate key '" + key + "' (first on line " +
                              std::to_string(entries[key].line) + ")");
    }
    entries[key] = Entry{value, line_no};
  }

  RunConfig cfg;
  cfg.source = source;
  std::optional<double> kappa2, mu, temperature, curie, chi, lp_tol;
  cfg.lp.max_points = Eigen::Index{1} << 22;
  std::string u0_text;
  int u0_line = 0;

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"domain.dim", [&](const std::string& v) { cfg.domain.dim = parse_int(v); }},
      {"domain.lengths",
       [&](const std::string& v) {
         const auto items = split_commas(v);
         if (items.empty() || items.size() > 3) throw ConfigError("expected 1 to 3 lengths");
         for (std::size_t j = 0; j < 3; ++j) {
           cfg.domain.lengths[j] = parse_double(items[std::min(j, items.size() - 1)]);
         }
       }},
      {"domain.bc", [&](const std::string& v) { cfg.domain.bc = parse_boundary(v); }},
      {"domain.modes", [&](const std::string& v) { cfg.modes_per_dim = parse_int_list(v); }},
      {"model.kappa1", [&](const std::string& v) { cfg.params.kappa1 = parse_double(v); }},
      {"model.kappa2", [&](const std::string& v) { kappa2 = parse_double(v); }},
      {"model.gamma", [&](const std::string& v) { cfg.params.gamma = parse_double(v); }},
      {"model.mu", [&](const std::string& v) { mu = parse_double(v); }},
      {"model.T", [&](const std::string& v) { temperature = parse_double(v); }},
      {"model.Tc", [&](const std::string& v) { curie = parse_double(v); }},
      {"model.chi_par", [&](const std::string& v) { chi = parse_double(v); }},
      {"solver.dt", [&](const std::string& v) { cfg.solver.dt = parse_double(v); }},
      {"solver.t_end", [&](const std::string& v) { cfg.solver.t_end = parse_double(v); }},
      {"solver.scheme", [&](const std::string& v) { cfg.solver.scheme = parse_scheme(v); }},
      {"solver.record_every", [&](const std::string& v) { cfg.solver.record_every = parse_int(v); }},
      {"solver.adapt", [&](const std::string& v) { cfg.solver.adapt.enabled = parse_bool(v); }},
      {"solver.adapt_tol", [&](const std::string& v) { cfg.solver.adapt.tolerance = parse_double(v); }},
      {"audit.beta", [&](const std::string& v) { cfg.beta = parse_double(v); }},
      {"audit.alpha", [&](const std::string& v) { cfg.alpha = parse_double(v); }},
      {"audit.c_tol", [&](const std::string& v) { cfg.c_tol = parse_double(v); }},
      {"audit.weak_modes", [&](const std::string& v) { cfg.weak_modes = parse_int(v); }},
      {"audit.lp_tol", [&](const std::string& v) { lp_tol = parse_double(v); }},
      {"audit.lp_points", [&](const std::string& v) { cfg.lp.max_points = parse_int(v); }},
      {"init.u0", [&](const std::string& v) { u0_text = v; }},
      {"output.dir",
       [&](const std::string& v) {
         const std::filesystem::path p(v);
         cfg.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
       }},
      {"output.trajectory", [&](const std::string& v) { cfg.write_trajectory = parse_bool(v); }},
  };

  // Keys are applied in file order so that the first bad line is reported.
  std::vector<std::pair<std::string, Entry>> ordered(entries.begin(), entries.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.second.line < b.second.line; });
  for (const auto& [key, entry] : ordered) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw fail(entry.line, "unknown key '" + key + "'");
    try {
      it->second(entry.value);
    } catch (const ConfigError& e) {
      throw fail(entry.line, key + ": " + e.what());
    }
    if (key == "init.u0") u0_line = entry.line;
  }

  const auto line_of = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };
  const auto check = [&](const std::string& key, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw fail(line_of(key), e.what());
    }
  };

  check("domain.dim", [&] { cfg.domain.validate(); });
  check("domain.modes", [&] {
    if (cfg.modes_per_dim.size() != 1 && static_cast<int>(cfg.modes_per_dim.size()) != cfg.domain.dim) {
      throw ConfigError("domain.modes needs 1 or dim entries");
    }
    for (int n : cfg.modes_per_dim) {
      if (n < 1) throw ConfigError("domain.modes entries must be >= 1");
    }
  });

  const bool any_temp = temperature || curie || chi;
  check(any_temp ? "model.T" : "model.kappa2", [&] {
    if (any_temp) {
      if (!(temperature && curie && chi)) {
        throw ConfigError("model.T, model.Tc and model.chi_par must be given together");
      }
      const ModelParams derived = ModelParams::from_temperature(cfg.params.kappa1, cfg.params.gamma,
                                                                *temperature, *curie, *chi);
      cfg.params.provenance = derived.provenance;
      cfg.params.kappa2 = kappa2.value_or(derived.kappa2);
      cfg.params.mu = mu.value_or(derived.mu);
    } else {
      if (kappa2) cfg.params.kappa2 = *kappa2;
      if (mu) cfg.params.mu = *mu;
    }
    cfg.params.validate();
  });
  check("solver.dt", [&] { cfg.solver.validate(); });
  check("audit.beta", [&] {
    if (!(cfg.beta > 0.0)) throw ConfigError("audit.beta must be positive");
  });
  check("audit.alpha", [&] {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 0.25)) throw ConfigError("audit.alpha must lie in (0, 1/4]");
  });
  check("audit.c_tol", [&] {
    if (!(cfg.c_tol > 0.0)) throw ConfigError("audit.c_tol must be positive");
  });
  check("audit.weak_modes", [&] {
    if (cfg.weak_modes < 1) throw ConfigError("audit.weak_modes must be >= 1");
  });

  cfg.lp.rel_tol = lp_tol.value_or(default_lp_tolerance(cfg.domain.dim));
  check("audit.lp_tol", [&] {
    if (!(cfg.lp.rel_tol > 0.0)) throw ConfigError("audit.lp_tol must be positive");
  });
  check("audit.lp_points", [&] {
    if (cfg.lp.max_points < 1) throw ConfigError("audit.lp_points must be >= 1");
  });

  if (u0_text.empty()) throw fail(0, "missing key 'init.u0'");
  try {
    cfg.u0 = InitialCondition::parse(u0_text, cfg.domain.dim, base_dir);
  } catch (const std::exception& e) {
    throw fail(u0_line, std::string("init.u0: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  return parse_config(in, path.string(), path.parent_path());
}

}  // namespace llb

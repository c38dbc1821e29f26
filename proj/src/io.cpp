#include "llb/io.hpp"

#include "llb/errors.hpp"
#include "llb/ledger.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace llb {

std::string to_string(Boundary bc) { return bc == Boundary::neumann ? "neumann" : "dirichlet"; }

Boundary parse_boundary(const std::string& name) {
  if (name == "neumann") return Boundary::neumann;
  if (name == "dirichlet") return Boundary::dirichlet;
  throw ConfigError("unknown boundary condition '" + name + "' (expected neumann or dirichlet)");
}

void write_checkpoint(std::ostream& out, const SpectralField& u, double time) {
  const Basis& b = u.basis();
  const int d = b.dim();
  out << "llb-checkpoint 1\n";
  out << "dim " << d << '\n';
  out << "bc " << to_string(b.boundary()) << '\n';
  out << "lengths";
  for (int j = 0; j < d; ++j) out << ' ' << format_double(b.domain().lengths[j]);
  out << "\nmodes_per_dim";
  for (int j = 0; j < d; ++j) out << ' ' << b.modes_per_dim()[j];
  out << "\nquad_points";
  for (int j = 0; j < d; ++j) out << ' ' << b.quadrature().points()[j];
  out << "\ntime " << format_double(time) << '\n';
  out << "coefficients " << b.size() << '\n';
  for (Eigen::Index m = 0; m < b.size(); ++m) {
    for (int j = 0; j < d; ++j) out << (j ? " " : "") << b.mode(m).k[j];
    out << " :";
    for (int c = 0; c < 3; ++c) out << ' ' << format_double(u.coeffs()(m, c));
    out << '\n';
  }
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::istringstream expect(const std::string& keyword) {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file, expected '" + keyword + "'");
    ++line_;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != keyword) fail("expected '" + keyword + "', found '" + word + "'");
    return ss;
  }

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++line_;
    return line;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

double parse_double(const std::string& token, const LineReader& reader) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    reader.fail("bad number '" + token + "'");
  }
  return v;
}

template <typename T>
std::vector<T> read_list(std::istringstream& ss, int count, const LineReader& reader) {
  std::vector<T> out;
  std::string token;
  while (ss >> token) {
    if constexpr (std::is_same_v<T, double>) {
      out.push_back(parse_double(token, reader));
    } else {
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        reader.fail("bad integer '" + token + "'");
      }
    }
  }
  if (static_cast<int>(out.size()) != count) {
    reader.fail("expected " + std::to_string(count) + " values, found " + std::to_string(out.size()));
  }
  return out;
}

}  // namespace

Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  {
    auto ss = reader.expect("llb-checkpoint");
    int version = 0;
    if (!(ss >> version) || version != 1) reader.fail("unsupported checkpoint version");
  }
  DomainSpec domain;
  {
    auto ss = reader.expect("dim");
    if (!(ss >> domain.dim) || domain.dim < 1 || domain.dim > 3) reader.fail("dim must be 1, 2 or 3");
  }
  {
    auto ss = reader.expect("bc");
    std::string name;
    ss >> name;
    try {
      domain.bc = parse_boundary(name);
    } catch (const ConfigError& e) {
      reader.fail(e.what());
    }
  }
  {
    auto ss = reader.expect("lengths");
    const auto l = read_list<double>(ss, domain.dim, reader);
    for (int j = 0; j < domain.dim; ++j) domain.lengths[j] = l[j];
  }
  std::vector<int> modes;
  std::vector<int> points;
  {
    auto ss = reader.expect("modes_per_dim");
    modes = read_list<int>(ss, domain.dim, reader);
  }
  {
    auto ss = reader.expect("quad_points");
    points = read_list<int>(ss, domain.dim, reader);
  }
  double time = 0.0;
  {
    auto ss = reader.expect("time");
    std::string token;
    ss >> token;
    time = parse_double(token, reader);
  }
  BasisPtr basis;
  try {
    basis = build_basis(domain, modes, points);
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }
  Eigen::Index count = 0;
  {
    auto ss = reader.expect("coefficients");
    if (!(ss >> count) || count != basis->size()) {
      reader.fail("coefficient count does not match the basis size " + std::to_string(basis->size()));
    }
  }
  SpectralField u(basis);
  for (Eigen::Index m = 0; m < count; ++m) {
    const std::string line = reader.next_line();
    const auto colon = line.find(':');
    if (colon == std::string::npos) reader.fail("expected 'k... : cx cy cz'");
    std::istringstream ks(line.substr(0, colon));
    std::istringstream cs(line.substr(colon + 1));
    const auto k = read_list<int>(ks, domain.dim, reader);
    ModeIndex idx;
    for (int j = 0; j < domain.dim; ++j) idx.k[j] = k[j];
    if (!(idx == basis->mode(m))) reader.fail("modes out of order");
    const auto c = read_list<double>(cs, 3, reader);
    for (int j = 0; j < 3; ++j) u.coeffs()(m, j) = c[j];
  }
  return {std::move(u), time};
}

void save_checkpoint(const std::filesystem::path& path, const SpectralField& u, double time) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_checkpoint(out, u, time);
  if (!out) throw ConfigError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& trajectory) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw ConfigError("cannot write " + (dir / "manifest.csv").string());
  manifest << "index,t,file\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    std::ostringstream name;
    name << "sample_" << std::setw(6) << std::setfill('0') << i << ".ckpt";
    save_checkpoint(dir / name.str(), trajectory.states[i], trajectory.times[i]);
    manifest << i << ',' << format_double(trajectory.times[i]) << ',' << name.str() << '\n';
  }
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.csv");
  if (!manifest) throw ConfigError("cannot read " + (dir / "manifest.csv").string());
  std::string line;
  std::getline(manifest, line);
  if (line != "index,t,file") throw ConfigError((dir / "manifest.csv").string() + ": bad header");
  Trajectory traj;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos) throw ConfigError("manifest.csv: malformed line '" + line + "'");
    Checkpoint c = load_checkpoint(dir / line.substr(last + 1));
    if (!traj.states.empty() && !c.field.basis().same_as(traj.basis())) {
      throw ConfigError("trajectory samples use different bases");
    }
    traj.times.push_back(c.time);
    traj.states.push_back(std::move(c.field));
  }
  if (traj.states.empty()) throw ConfigError((dir / "manifest.csv").string() + ": no samples");
  traj.validate();
  return traj;
}

}  // namespace llb

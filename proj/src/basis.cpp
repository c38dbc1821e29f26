#include "llb/basis.hpp"

#include "llb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace llb {

void DomainSpec::validate() const {
  if (dim < 1 || dim > 3) {
    throw ConfigError("domain dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  }
  for (int j = 0; j < dim; ++j) {
    if (!(lengths[j] > 0.0) || !std::isfinite(lengths[j])) {
      throw ConfigError("domain length along axis " + std::to_string(j) + " must be positive");
    }
  }
}

double DomainSpec::volume() const {
  double v = 1.0;
  for (int j = 0; j < dim; ++j) v *= lengths[j];
  return v;
}

double eigenvalue_of(const DomainSpec& domain, const ModeIndex& k) {
  double lambda = 0.0;
  for (int j = 0; j < domain.dim; ++j) {
    const double w = k.k[j] * std::numbers::pi / domain.lengths[j];
    lambda += w * w;
  }
  return lambda;
}

namespace trig {

double normalization(Family family, int a, double length) {
  if (family == Family::cosine && a == 0) return 1.0 / std::sqrt(length);
  return std::sqrt(2.0 / length);
}

double value(Family family, int a, double length, double x) {
  const double arg = a * std::numbers::pi * x / length;
  const double n = normalization(family, a, length);
  return family == Family::cosine ? n * std::cos(arg) : n * std::sin(arg);
}

double derivative(Family family, int a, double length, double x) {
  const double w = a * std::numbers::pi / length;
  const double n = normalization(family, a, length);
  return family == Family::cosine ? -n * w * std::sin(w * x) : n * w * std::cos(w * x);
}

double overlap(Family f, int a, Family g, int b, double length) {
  if (f == g) return a == b ? 1.0 : 0.0;
  if (f == Family::sine) {
    std::swap(a, b);
  }
  // a: cosine wave number, b: sine wave number.
  if (a == b) return 0.0;
  if (((a + b) & 1) == 0) return 0.0;
  const double integral =
      length / std::numbers::pi * 2.0 * b / (static_cast<double>(b) * b - static_cast<double>(a) * a);
  return normalization(Family::cosine, a, length) * normalization(Family::sine, b, length) *
         integral;
}

}  // namespace trig

namespace {

Family opposite(Family f) { return f == Family::cosine ? Family::sine : Family::cosine; }

int first_wave(Family f) { return f == Family::cosine ? 0 : 1; }

}  // namespace

Quadrature::Quadrature(const Basis& basis, const Extents& points)
    : dim_(basis.dim()), family_(basis.family()) {
  const DomainSpec& domain = basis.domain();
  const Family family = family_;
  const int k0 = basis.first_wave_number();
  size_ = 1;
  weight_ = 1.0;
  for (int j = 0; j < 3; ++j) {
    if (j >= dim_) {
      points_[j] = 1;
      modes_[j] = 1;
      kmax_[j] = 0;
      continue;
    }
    if (points[j] < 1) throw ConfigError("quadrature needs at least one point per axis");
    const int m = points[j];
    const int n = basis.modes_per_dim()[j];
    const double length = domain.lengths[j];
    lengths_[j] = length;
    points_[j] = m;
    modes_[j] = n;
    kmax_[j] = basis.max_wave_number(j);
    size_ *= m;
    const double w = length / m;
    weight_ *= w;

    nodes_[j].resize(m);
    for (int q = 0; q < m; ++q) nodes_[j](q) = (q + 0.5) * w;

    synth_[j].resize(m, n);
    dsynth_[j].resize(m, n);
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < m; ++q) {
        synth_[j](q, i) = trig::value(family, k0 + i, length, nodes_[j](q));
        dsynth_[j](q, i) = trig::derivative(family, k0 + i, length, nodes_[j](q));
      }
    }

  }
}

void Quadrature::build_analysis(int j) const {
  const int m = points_[j];
  const int n = modes_[j];
  const int k0 = first_wave(family_);
  const double length = lengths_[j];
  const double w = length / m;

  // Inverse of the nodal matrix of the complete M-term family at the
  // midpoints, from discrete orthogonality: Phi^{-1} = D Phi^T w with D = 1
  // except 1/2 for the top sine member.
  std::array<Eigen::MatrixXd, 2> expand;
  for (int p = 0; p < 2; ++p) {
    const Family input = p == 0 ? Family::cosine : Family::sine;
    Eigen::MatrixXd& e = expand[p];
    e.resize(m, m);
    for (int a = 0; a < m; ++a) {
      const int wave = first_wave(input) + a;
      const double d = (input == Family::sine && wave == m) ? 0.5 : 1.0;
      for (int q = 0; q < m; ++q) e(a, q) = d * w * trig::value(input, wave, length, nodes_[j](q));
    }
  }

  for (int d = 0; d < 2; ++d) {
    // Test functions: basis members, or their derivatives written as
    // scale * (member of the opposite family) with the same wave number.
    const Family test = d == 0 ? family_ : opposite(family_);
    Eigen::VectorXd scale(n);
    for (int i = 0; i < n; ++i) {
      const int k = k0 + i;
      if (d == 0) {
        scale(i) = 1.0;
      } else {
        const double wk = k * std::numbers::pi / length;
        // d/dx cos_k = -wk sin_k, d/dx sin_k = wk cos_k (normalizations agree for k >= 1).
        scale(i) = family_ == Family::cosine ? -wk : wk;
      }
    }
    for (int p = 0; p < 2; ++p) {
      const Family input = p == 0 ? Family::cosine : Family::sine;
      Eigen::MatrixXd& op = analysis_[j][2 * d + p];
      if (input == test) {
        op.resize(n, m);
        for (int i = 0; i < n; ++i) {
          const int k = k0 + i;
          for (int q = 0; q < m; ++q) {
            const double g = (d == 1 && k == 0) ? 0.0 : trig::value(test, k, length, nodes_[j](q));
            op(i, q) = w * scale(i) * g;
          }
        }
      } else {
        Eigen::MatrixXd overlaps(n, m);
        for (int i = 0; i < n; ++i) {
          const int k = k0 + i;
          for (int a = 0; a < m; ++a) {
            overlaps(i, a) = (d == 1 && k == 0)
                                 ? 0.0
                                 : scale(i) * trig::overlap(test, k, input, first_wave(input) + a, length);
          }
        }
        op = overlaps * expand[p];
      }
    }
  }
}

const Eigen::MatrixXd& Quadrature::analysis(int axis, bool derivative_test, bool sine_input) const {
  std::call_once(analysis_once_[axis], [this, axis] { build_analysis(axis); });
  return analysis_[axis][(derivative_test ? 2 : 0) + (sine_input ? 1 : 0)];
}

std::array<double, 3> Quadrature::node(Eigen::Index flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int j = 0; j < dim_; ++j) {
    x[j] = nodes_[j](flat % points_[j]);
    flat /= points_[j];
  }
  return x;
}

bool Quadrature::integrates_exactly(int factors) const {
  for (int j = 0; j < dim_; ++j) {
    if (static_cast<long>(factors) * kmax_[j] >= 2L * points_[j]) return false;
  }
  return true;
}

bool Quadrature::expands_exactly(int factors) const {
  for (int j = 0; j < dim_; ++j) {
    if (static_cast<long>(factors) * kmax_[j] > points_[j] - 1L) return false;
  }
  return true;
}

Basis::Basis(const DomainSpec& domain, const Extents& modes_per_dim,
             std::optional<Extents> quad_points)
    : domain_(domain) {
  domain_.validate();
  for (int j = 0; j < 3; ++j) {
    if (j >= domain_.dim) {
      modes_per_dim_[j] = 1;
      continue;
    }
    if (modes_per_dim[j] < 1) {
      throw ConfigError("modes per dimension must be >= 1 (axis " + std::to_string(j) + ")");
    }
    modes_per_dim_[j] = modes_per_dim[j];
  }
  for (int j = domain_.dim; j < 3; ++j) domain_.lengths[j] = 1.0;

  const int k0 = first_wave_number();
  const Extents& n = modes_per_dim_;
  std::vector<ModeIndex> all;
  all.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int a = 0; a < n[0]; ++a) {
    for (int b = 0; b < n[1]; ++b) {
      for (int c = 0; c < n[2]; ++c) {
        ModeIndex k;
        k.k = {k0 + a, domain_.dim > 1 ? k0 + b : 0, domain_.dim > 2 ? k0 + c : 0};
        all.push_back(k);
      }
    }
  }
  std::vector<double> lambda(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) lambda[i] = eigenvalue_of(domain_, all[i]);

  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const double tol = 1e-12 * std::max(1.0, std::max(lambda[x], lambda[y]));
    if (std::abs(lambda[x] - lambda[y]) > tol) return lambda[x] < lambda[y];
    return all[x] < all[y];
  });

  modes_.reserve(all.size());
  eigenvalues_.resize(static_cast<Eigen::Index>(all.size()));
  tensor_offset_.reserve(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ModeIndex& k = all[order[i]];
    modes_.push_back(k);
    eigenvalues_(static_cast<Eigen::Index>(i)) = lambda[order[i]];
    Eigen::Index offset = k.k[0] - k0;
    if (domain_.dim > 1) offset += static_cast<Eigen::Index>(n[0]) * (k.k[1] - k0);
    if (domain_.dim > 2) offset += static_cast<Eigen::Index>(n[0]) * n[1] * (k.k[2] - k0);
    tensor_offset_.push_back(offset);
  }
  mode_at_offset_.resize(tensor_offset_.size());
  for (std::size_t i = 0; i < tensor_offset_.size(); ++i) {
    mode_at_offset_[static_cast<std::size_t>(tensor_offset_[i])] = static_cast<Eigen::Index>(i);
  }

  Extents points{1, 1, 1};
  for (int j = 0; j < domain_.dim; ++j) {
    points[j] = quad_points ? (*quad_points)[j] : 2 * modes_per_dim_[j] + 1;
  }
  cache_ = std::make_shared<QuadratureCache>();
  quadrature_ = std::make_shared<const Quadrature>(*this, points);
}

int Basis::max_wave_number(int axis) const {
  if (axis >= domain_.dim) return 0;
  return first_wave_number() + modes_per_dim_[axis] - 1;
}

std::optional<Eigen::Index> Basis::find(const ModeIndex& k) const {
  const int k0 = first_wave_number();
  Eigen::Index offset = 0;
  Eigen::Index stride = 1;
  for (int j = 0; j < 3; ++j) {
    if (j >= domain_.dim) {
      if (k.k[j] != 0) return std::nullopt;
      continue;
    }
    const int i = k.k[j] - k0;
    if (i < 0 || i >= modes_per_dim_[j]) return std::nullopt;
    offset += stride * i;
    stride *= modes_per_dim_[j];
  }
  return mode_at_offset_[static_cast<std::size_t>(offset)];
}

bool Basis::same_as(const Basis& other) const {
  if (this == &other) return true;
  if (domain_.dim != other.domain_.dim || domain_.bc != other.domain_.bc) return false;
  for (int j = 0; j < domain_.dim; ++j) {
    if (domain_.lengths[j] != other.domain_.lengths[j]) return false;
    if (modes_per_dim_[j] != other.modes_per_dim_[j]) return false;
  }
  return true;
}

bool Basis::nested_in(const Basis& other) const {
  if (domain_.dim != other.domain_.dim || domain_.bc != other.domain_.bc) return false;
  for (int j = 0; j < domain_.dim; ++j) {
    if (domain_.lengths[j] != other.domain_.lengths[j]) return false;
    if (modes_per_dim_[j] > other.modes_per_dim_[j]) return false;
  }
  return true;
}

struct Basis::QuadratureCache {
  std::mutex mutex;
  std::map<Extents, std::shared_ptr<const Quadrature>> grids;
};

std::shared_ptr<const Quadrature> Basis::make_quadrature(const Extents& points) const {
  if (quadrature_ && points == quadrature_->points()) return quadrature_;
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->grids[points];
  if (!slot) slot = std::make_shared<const Quadrature>(*this, points);
  return slot;
}

std::shared_ptr<const Quadrature> Basis::exact_quadrature(int factors) const {
  Extents points = quadrature_->points();
  for (int j = 0; j < domain_.dim; ++j) {
    const int needed = factors * max_wave_number(j) / 2 + 1;
    points[j] = std::max(points[j], needed);
  }
  if (points == quadrature_->points()) return quadrature_;
  return make_quadrature(points);
}

namespace {

Extents expand_counts(const DomainSpec& domain, std::span<const int> counts, const char* what) {
  Extents out{1, 1, 1};
  if (counts.size() == 1) {
    for (int j = 0; j < domain.dim; ++j) out[j] = counts[0];
  } else if (static_cast<int>(counts.size()) == domain.dim) {
    for (int j = 0; j < domain.dim; ++j) out[j] = counts[j];
  } else {
    throw ConfigError(std::string(what) + " needs 1 or " + std::to_string(domain.dim) +
                      " entries (got " + std::to_string(counts.size()) + ")");
  }
  return out;
}

}  // namespace

BasisPtr build_basis(const DomainSpec& domain, std::span<const int> modes_per_dim) {
  domain.validate();
  return std::make_shared<const Basis>(domain, expand_counts(domain, modes_per_dim, "modes_per_dim"));
}

BasisPtr build_basis(const DomainSpec& domain, std::span<const int> modes_per_dim,
                     std::span<const int> quad_points) {
  domain.validate();
  return std::make_shared<const Basis>(domain, expand_counts(domain, modes_per_dim, "modes_per_dim"),
                                       expand_counts(domain, quad_points, "quad_points"));
}

}  // namespace llb

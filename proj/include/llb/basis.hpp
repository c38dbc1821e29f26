#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace llb {

enum class Boundary { neumann, dirichlet };

/// One-dimensional eigenfunction families on [0, L].
enum class Family { cosine, sine };

using Extents = std::array<int, 3>;

struct DomainSpec {
  int dim = 1;
  std::array<double, 3> lengths{std::numbers::pi, std::numbers::pi, std::numbers::pi};
  Boundary bc = Boundary::neumann;

  void validate() const;
  double volume() const;
};

/// Per-dimension wave numbers. Unused dimensions hold 0.
struct ModeIndex {
  std::array<int, 3> k{0, 0, 0};

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Closed-form 1-D eigenfunctions, normalized in L2(0, L).
namespace trig {

double normalization(Family family, int a, double length);
double value(Family family, int a, double length, double x);
double derivative(Family family, int a, double length, double x);

/// Exact integral over [0, L] of the product of two normalized family members.
double overlap(Family f, int a, Family g, int b, double length);

}  // namespace trig

class Basis;

/// Equispaced midpoint grid together with per-axis synthesis and analysis
/// matrices for a given basis.
///
/// Midpoint sums integrate cos(m pi x / L) exactly for 0 <= m < 2M. A product
/// of `f` basis functions (or their derivatives) with total cosine parity is
/// therefore integrated exactly when f * kmax < 2M. Integrands of sine parity
/// are handled by first expanding the nodal input in the complementary family,
/// which is exact when its frequency content stays <= M - 1.
class Quadrature {
 public:
  Quadrature(const Basis& basis, const Extents& points);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Extents& points() const { return points_; }
  [[nodiscard]] const Extents& modes() const { return modes_; }
  [[nodiscard]] Eigen::Index size() const { return size_; }
  [[nodiscard]] double weight() const { return weight_; }
  [[nodiscard]] const Eigen::VectorXd& nodes(int axis) const { return nodes_[axis]; }
  [[nodiscard]] std::array<double, 3> node(Eigen::Index flat) const;

  /// M x N matrix of basis values (or d/dx values) at the nodes of `axis`.
  [[nodiscard]] const Eigen::MatrixXd& synthesis(int axis, bool derivative) const {
    return derivative ? dsynth_[axis] : synth_[axis];
  }
  /// N x M matrix mapping nodal samples of a function with the given parity to
  /// its L2 pairings with the basis functions (or their derivatives).
  /// Built on first use; refined grids that only synthesize never pay for it.
  [[nodiscard]] const Eigen::MatrixXd& analysis(int axis, bool derivative_test,
                                                bool sine_input) const;

  /// Same-parity integrand made of `factors` basis functions is exact.
  [[nodiscard]] bool integrates_exactly(int factors) const;
  /// A nodal product of `factors` basis functions is expanded exactly.
  [[nodiscard]] bool expands_exactly(int factors) const;

 private:
  void build_analysis(int axis) const;

  int dim_ = 1;
  Family family_ = Family::cosine;
  std::array<double, 3> lengths_{1.0, 1.0, 1.0};
  Extents points_{1, 1, 1};
  Extents modes_{1, 1, 1};
  Extents kmax_{0, 0, 0};
  Eigen::Index size_ = 1;
  double weight_ = 1.0;
  std::array<Eigen::VectorXd, 3> nodes_;
  std::array<Eigen::MatrixXd, 3> synth_;
  std::array<Eigen::MatrixXd, 3> dsynth_;
  mutable std::array<std::array<Eigen::MatrixXd, 4>, 3> analysis_;
  mutable std::array<std::once_flag, 3> analysis_once_;
};

/// Tensor-product Laplacian eigenbasis on an axis-aligned box.
///
/// Modes are ordered by (eigenvalue, lexicographic index), so the leading
/// modes of a larger basis contain those of a smaller one.
class Basis {
 public:
  Basis(const DomainSpec& domain, const Extents& modes_per_dim,
        std::optional<Extents> quad_points = std::nullopt);

  [[nodiscard]] const DomainSpec& domain() const { return domain_; }
  [[nodiscard]] int dim() const { return domain_.dim; }
  [[nodiscard]] Boundary boundary() const { return domain_.bc; }
  [[nodiscard]] Family family() const {
    return domain_.bc == Boundary::neumann ? Family::cosine : Family::sine;
  }
  /// Smallest wave number admitted per dimension (0 for Neumann, 1 for Dirichlet).
  [[nodiscard]] int first_wave_number() const { return domain_.bc == Boundary::neumann ? 0 : 1; }
  [[nodiscard]] const Extents& modes_per_dim() const { return modes_per_dim_; }
  [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(modes_.size()); }
  [[nodiscard]] std::span<const ModeIndex> modes() const { return modes_; }
  [[nodiscard]] const ModeIndex& mode(Eigen::Index m) const { return modes_[m]; }
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] double lambda_max() const { return eigenvalues_.maxCoeff(); }
  [[nodiscard]] double lambda_sum() const { return eigenvalues_.sum(); }
  [[nodiscard]] int max_wave_number(int axis) const;

  /// Position of mode `m` inside the (N0, N1, N2) coefficient tensor.
  [[nodiscard]] Eigen::Index tensor_offset(Eigen::Index m) const { return tensor_offset_[m]; }
  [[nodiscard]] std::optional<Eigen::Index> find(const ModeIndex& k) const;

  /// Every mode of this basis is a mode of `other` (same domain).
  [[nodiscard]] bool nested_in(const Basis& other) const;
  [[nodiscard]] bool same_as(const Basis& other) const;

  /// Default grid: 2 N_j + 1 midpoints per axis unless overridden.
  [[nodiscard]] const Quadrature& quadrature() const { return *quadrature_; }
  /// Grids are cached per point count; the cache is shared by copies.
  [[nodiscard]] std::shared_ptr<const Quadrature> make_quadrature(const Extents& points) const;
  /// Smallest grid (at least the default) that integrates `factors` basis
  /// functions of matching parity exactly.
  [[nodiscard]] std::shared_ptr<const Quadrature> exact_quadrature(int factors) const;

 private:
  DomainSpec domain_;
  Extents modes_per_dim_{1, 1, 1};
  std::vector<ModeIndex> modes_;
  Eigen::VectorXd eigenvalues_;
  std::vector<Eigen::Index> tensor_offset_;
  std::vector<Eigen::Index> mode_at_offset_;
  std::shared_ptr<const Quadrature> quadrature_;
  struct QuadratureCache;
  std::shared_ptr<QuadratureCache> cache_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// `modes_per_dim` has one entry per dimension, or a single entry applied to all.
BasisPtr build_basis(const DomainSpec& domain, std::span<const int> modes_per_dim);
BasisPtr build_basis(const DomainSpec& domain, std::span<const int> modes_per_dim,
                     std::span<const int> quad_points);
inline BasisPtr build_basis(const DomainSpec& domain, std::initializer_list<int> modes_per_dim) {
  return build_basis(domain, std::span<const int>(modes_per_dim.begin(), modes_per_dim.size()));
}

/// Sum over dimensions of (k_j pi / L_j)^2.
double eigenvalue_of(const DomainSpec& domain, const ModeIndex& k);

}  // namespace llb

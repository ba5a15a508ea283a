#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hfbm {

/// Hurst index H in the open interval (0, 1).
class HurstIndex {
 public:
  explicit HurstIndex(double value);

  double value() const noexcept { return value_; }
  bool is_brownian() const noexcept { return value_ == 0.5; }

  /// Throws DomainError unless H > 1/3 (rough-path machinery).
  void require_rough() const;
  /// Throws DomainError unless H == 1/2.
  void require_brownian() const;

 private:
  double value_;
};

/// Dyadic grid t_i = i / 2^level on [0, 1].
class DyadicGrid {
 public:
  static constexpr unsigned kMaxLevel = 24;

  explicit DyadicGrid(unsigned level);

  unsigned level() const noexcept { return level_; }
  std::size_t intervals() const noexcept { return std::size_t{1} << level_; }
  std::size_t size() const noexcept { return intervals() + 1; }
  double mesh() const noexcept { return 1.0 / static_cast<double>(intervals()); }
  double point(std::size_t i) const noexcept { return static_cast<double>(i) * mesh(); }

  bool contains(double t) const noexcept;
  /// Index of t on this grid; throws DomainError if t is not a grid point.
  std::size_t index_of(double t) const;
  /// Index on this grid of point i of a coarser grid.
  std::size_t refine_index(std::size_t coarse_index, unsigned coarse_level) const;

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

 private:
  unsigned level_;
};

/// Smallest dyadic level on which every time in `times` is a grid point.
unsigned dyadic_level_of(std::span<const double> times, unsigned max_level = DyadicGrid::kMaxLevel);

/// Sampled scalar path, values[i] at grid.point(i); values[0] == 0.
struct ScalarPath {
  DyadicGrid grid;
  std::vector<double> values;

  double at(double t) const { return values[grid.index_of(t)]; }
  /// Subsample onto a coarser dyadic grid.
  ScalarPath restrict_to(unsigned level) const;
};

/// c_H(s, t) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(HurstIndex H, double s, double t);

/// Covariance of the increments x_{u2} - x_{u1} and x_{v2} - x_{v1}.
double increment_covariance(HurstIndex H, double u1, double u2, double v1, double v2);

/// Gram matrix of c_H over the nonzero grid points t_1..t_{2^n}.
Eigen::MatrixXd gram_matrix(HurstIndex H, const DyadicGrid& grid);

/// Exact sampler for scalar fBm on one dyadic grid.
///
/// Brownian H = 1/2 draws i.i.d. increments. Otherwise grids with at most
/// 2^10 nonzero points factor the Gram matrix (Cholesky, one ridge retry);
/// finer grids use circulant embedding of fractional Gaussian noise. The
/// factorization is computed once at construction and the sampler is
/// immutable afterwards.
class FbmSampler {
 public:
  enum class Method { Brownian, Cholesky, Circulant };

  static constexpr unsigned kCholeskyMaxLevel = 10;

  FbmSampler(HurstIndex H, DyadicGrid grid);

  HurstIndex hurst() const noexcept { return hurst_; }
  const DyadicGrid& grid() const noexcept { return grid_; }
  Method method() const noexcept { return method_; }

  ScalarPath sample(std::uint64_t seed) const;
  /// One path per seed; equivalent to calling sample() for each seed.
  std::vector<ScalarPath> sample_many(std::span<const std::uint64_t> seeds) const;

  /// Cholesky factor (empty unless method() == Cholesky).
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return factor_; }

 private:
  ScalarPath brownian(std::uint64_t seed) const;
  ScalarPath circulant(std::uint64_t seed) const;

  HurstIndex hurst_;
  DyadicGrid grid_;
  Method method_;
  Eigen::MatrixXd factor_;
  std::vector<double> embedding_scale_;  // sqrt(lambda_k / M) for circulant
};

/// Convenience wrapper constructing a throwaway FbmSampler.
ScalarPath sample_fbm(HurstIndex H, const DyadicGrid& grid, std::uint64_t seed);

}  // namespace hfbm

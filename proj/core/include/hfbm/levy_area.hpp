#pragma once

#include <memory>
#include <vector>

#include "hfbm/algebra.hpp"
#include "hfbm/fbm.hpp"
#include "hfbm/hermitian.hpp"

namespace hfbm {

enum class AreaMode { LeftPoint, Trapezoid };

const char* to_string(AreaMode mode) noexcept;

/// Discrete iterated integral of b against a over [s, t] (coarse points),
/// summed on the shared fine grid of the two paths.
double scalar_area(const ScalarPath& a, const ScalarPath& b, const DyadicGrid& coarse, double s,
                   double t, AreaMode mode);

/// Level-2 increments X2_st((i,j),(k,l)) = int_s^t dX_su(i,j) dX_u(k,l) of a
/// Hermitian path, for s, t on a coarse dyadic grid, computed from sums on
/// the fine grid of the sample. Areas over adjacent coarse intervals are
/// stored; longer intervals are assembled with Chen's relation.
class LevyArea2 {
 public:
  /// Real-area route: combines the d^2 x d^2 scalar areas of the bundle.
  static LevyArea2 lift(const ScalarPathBundle& bundle, unsigned coarse_level, AreaMode mode);
  /// Complex route: sums directly over the entries of a fine path.
  static LevyArea2 lift(const HermitianPath& fine, unsigned coarse_level, AreaMode mode);

  std::size_t dim() const noexcept { return dim_; }
  const DyadicGrid& coarse() const noexcept { return coarse_; }
  const DyadicGrid& fine() const noexcept { return path_->grid(); }
  AreaMode mode() const noexcept { return mode_; }
  const HermitianPath& path() const noexcept { return *path_; }

  /// X at coarse index k.
  const Matrix& value(std::size_t k) const { return values_.at(k); }
  /// X_b - X_a for coarse indices a <= b.
  Matrix increment(std::size_t a, std::size_t b) const { return values_.at(b) - values_.at(a); }

  /// Area over coarse indices a <= b via Chen from stored blocks.
  Tensor2 area(std::size_t a, std::size_t b) const;
  /// Area over coarse indices a <= b summed directly on the fine grid.
  Tensor2 direct_area(std::size_t a, std::size_t b) const;
  /// Area between coarse times s <= t.
  Tensor2 area_between(double s, double t) const { return area(coarse_.index_of(s), coarse_.index_of(t)); }

  const Tensor2& block(std::size_t m) const { return blocks_.at(m); }

 private:
  LevyArea2(std::shared_ptr<const HermitianPath> path, unsigned coarse_level, AreaMode mode);
  void check_indices(std::size_t a, std::size_t b) const;

  std::size_t dim_;
  DyadicGrid coarse_;
  AreaMode mode_;
  std::shared_ptr<const HermitianPath> path_;
  std::vector<Matrix> values_;
  std::vector<Tensor2> blocks_;
};

/// Product Levy area X_st[U (x) V](i,j) = sum U(i,k) V(l1,l2) X2((k,l1),(l2,j)).
class ProductLevyArea {
 public:
  explicit ProductLevyArea(std::shared_ptr<const LevyArea2> area);

  const LevyArea2& area() const noexcept { return *area_; }
  std::size_t dim() const noexcept { return area_->dim(); }

  Matrix apply(std::size_t a, std::size_t b, const Tensor2& t) const;
  Matrix apply(std::size_t a, std::size_t b, const Tensor2List& t) const;
  /// X*_st[U (x) V] = X_st[V* (x) U*]*.
  Matrix dual_apply(std::size_t a, std::size_t b, const Tensor2& t) const;
  Matrix dual_apply(std::size_t a, std::size_t b, const Tensor2List& t) const;

  /// X_st[T] - X_su[T] - X_ut[T] - (T # dX_su) dX_ut with directly summed areas.
  Matrix chen_defect(std::size_t s, std::size_t u, std::size_t t, const Tensor2& tensor) const;

  /// Operator norm of T -> X_st[T] (Frobenius norms on both sides).
  double operator_norm(std::size_t a, std::size_t b) const;

 private:
  std::shared_ptr<const LevyArea2> area_;
};

/// Contraction X[U (x) V] for a given dense area.
Matrix apply_area(const Tensor2& x2, const Tensor2& t);
/// M(k,j) = sum B(l1,l2) X2((k,l1),(l2,j)); X[A (x) B] = A M.
Matrix contract_right(const Tensor2& x2, const Matrix& b);

/// X2_st - X2_su - X2_ut - dX_su (x) dX_ut, componentwise, with direct areas.
Tensor2 classical_chen_defect(const LevyArea2& area, std::size_t s, std::size_t u, std::size_t t);

struct MatrixEstimate {
  Matrix mean;
  Eigen::MatrixXd se_real;
  Eigen::MatrixXd se_imag;
  std::size_t samples = 0;
};

/// Monte-Carlo mean of the (trapezoid - left-point) product area over [s,t]
/// applied to U (x) V. Brownian case only.
MatrixEstimate strato_minus_ito_area(HurstIndex H, std::size_t d, unsigned fine_level, double s,
                                     double t, const Matrix& u, const Matrix& v,
                                     std::size_t samples, std::uint64_t seed, unsigned threads = 1);

}  // namespace hfbm

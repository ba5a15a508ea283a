#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hfbm/algebra.hpp"
#include "hfbm/fbm.hpp"

namespace hfbm {

/// The d(d+1) independent scalar fBm paths behind a Hermitian fBm:
/// x(i,j) for j <= i and x~(i,j) for j < i (0-based), on one grid.
class ScalarPathBundle {
 public:
  /// real: packed lower triangle with diagonal, slot i(i+1)/2 + j.
  /// imag: packed strict lower triangle, slot i(i-1)/2 + j.
  ScalarPathBundle(std::size_t d, std::vector<ScalarPath> real, std::vector<ScalarPath> imag);

  /// Samples every path from `sampler` with seed path_seed(seed, i, j, kind).
  static ScalarPathBundle sample(const FbmSampler& sampler, std::size_t d, std::uint64_t seed,
                                 unsigned threads = 1);

  std::size_t dim() const noexcept { return dim_; }
  const DyadicGrid& grid() const noexcept { return grid_; }

  const ScalarPath& real(std::size_t i, std::size_t j) const;
  const ScalarPath& imag(std::size_t i, std::size_t j) const;
  const std::vector<ScalarPath>& real_paths() const noexcept { return real_; }
  const std::vector<ScalarPath>& imag_paths() const noexcept { return imag_; }

  ScalarPathBundle scaled(double lambda) const;
  ScalarPathBundle restrict_to(unsigned level) const;

 private:
  std::size_t dim_;
  DyadicGrid grid_;
  std::vector<ScalarPath> real_;
  std::vector<ScalarPath> imag_;
};

/// Sampled Hermitian matrix path. Stores the upper triangle with diagonal
/// per grid point; full matrices are built on demand.
class HermitianPath {
 public:
  HermitianPath(std::size_t d, DyadicGrid grid);

  /// Builds a path from full matrices, keeping their upper triangles.
  static HermitianPath from_matrices(const DyadicGrid& grid, const std::vector<Matrix>& values);

  std::size_t dim() const noexcept { return dim_; }
  const DyadicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }

  /// Entry (i, j) at grid index k; lower entries are conjugates.
  Complex entry(std::size_t k, std::size_t i, std::size_t j) const;
  void set_upper(std::size_t k, std::size_t i, std::size_t j, Complex v);

  Matrix at_index(std::size_t k) const;
  Matrix at(double t) const { return at_index(grid_.index_of(t)); }
  /// X_b - X_a for grid indices a, b.
  Matrix increment(std::size_t a, std::size_t b) const;

  HermitianPath restrict_to(unsigned level) const;

  /// Entries of all matrices as a (points x d^2) array, column i*d + j.
  Eigen::MatrixXcd entry_table() const;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const noexcept;

  std::size_t dim_;
  DyadicGrid grid_;
  std::vector<Complex> packed_;  // per point: d(d+1)/2 upper entries
};

/// X(i,i) = x(i,i)/sqrt(d), X(i,j) = (x(i,j) + i x~(i,j))/sqrt(2d) for i > j.
HermitianPath assemble_hfbm(const ScalarPathBundle& bundle);

/// (1/d) c_H(s,t) [i == l][j == k] for E[X_s(i,j) X_t(k,l)].
double hfbm_covariance(HurstIndex H, double s, double t, std::size_t i, std::size_t j,
                       std::size_t k, std::size_t l, std::size_t d);

/// Header of the binary path cache.
struct PathHeader {
  std::uint32_t dim = 0;
  std::uint32_t level = 0;
  double hurst = 0.5;
  std::uint64_t seed = 0;
};

/// Binary dump: "HFBM", u32 version, u32 d, u32 level, f64 H, u64 seed, then
/// one row-major d x d matrix of (f32 re, f32 im) per grid point, little endian.
void write_path(std::ostream& os, const HermitianPath& path, const PathHeader& header);
void write_path(const std::string& file, const HermitianPath& path, const PathHeader& header);
HermitianPath read_path(std::istream& is, PathHeader* header = nullptr);
HermitianPath read_path(const std::string& file, PathHeader* header = nullptr);

}  // namespace hfbm

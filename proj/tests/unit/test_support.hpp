#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hfbm/algebra.hpp"

namespace hfbm::testing {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n;
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, std::size_t d) {
  const Matrix m = random_matrix(rng, d);
  return 0.5 * (m + m.adjoint());
}

inline Tensor2 random_tensor2(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n;
  Tensor2 t(d);
  for (Eigen::Index i = 0; i < t.coeffs().rows(); ++i)
    for (Eigen::Index j = 0; j < t.coeffs().cols(); ++j) t.coeffs()(i, j) = Complex(n(rng), n(rng));
  return t;
}

struct Stats {
  double mean;
  double se;
};

inline Stats stats(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  const double n = static_cast<double>(v.size());
  const double m = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace hfbm::testing

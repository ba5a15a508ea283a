#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hfbm/algebra.hpp"
#include "hfbm/fbm.hpp"

namespace hfbm {

/// Gaussian letter: the value X_t or the increment X_t - X_s.
struct Letter {
  enum class Kind { Point, Increment };
  Kind kind = Kind::Point;
  double s = 0.0;
  double t = 0.0;

  static Letter point(double t) { return {Kind::Point, 0.0, t}; }
  static Letter increment(double s, double t) { return {Kind::Increment, s, t}; }
};

/// Covariance of two letters, bilinear in c_H.
double letter_covariance(HurstIndex H, const Letter& a, const Letter& b);

/// Ordered product of letters whose joint law is that of the NC/Hermitian fBm.
struct MomentQuery {
  std::vector<Letter> letters;
  HurstIndex H;
};

/// Linear combination of words.
struct WordTerm {
  double coeff;
  std::vector<Letter> letters;
};

Eigen::MatrixXd covariance_matrix(const MomentQuery& q);

/// G_g = sum over pairings of genus g of prod cov(p, pi(p)), for g = 0..r/4.
/// A Gaussian family with E[X(i,j) Y(k,l)] = c [i == l][j == k] / d has
/// E[Tr_d(product)] = sum_g d^{-2g} G_g. Odd r gives {0}.
std::vector<double> genus_sums(const Eigen::MatrixXd& cov);
std::vector<double> genus_sums(const MomentQuery& q);
std::vector<double> genus_sums(const std::vector<WordTerm>& terms, HurstIndex H);

/// sum_g d^{-2g} G_g.
double combine_genus_sums(const std::vector<double>& sums, std::optional<unsigned> d);

/// phi_d of the query at finite d.
double genus_expansion_moment(const MomentQuery& q, unsigned d);
/// Non-crossing part, the d -> infinity limit.
double nc_moment(const MomentQuery& q);
/// Genus-g slice; 0 for g > r/4.
double genus_g_functional(const MomentQuery& q, unsigned g);
double genus_g_functional(const std::vector<WordTerm>& terms, HurstIndex H, unsigned g);

/// (X_s X_t - X_t X_s)(X_s X_t - X_t X_s)* expanded into four words.
std::vector<WordTerm> commutator_square(double s, double t);

/// Genus sums of phi((sum_i P(X_ti) dX_ti Q(X_ti))^r) over the level-n grid.
/// Requires real coefficients, r (deg P + deg Q + 1) <= 12 and n <= 6.
std::vector<double> riemann_integrand_genus_sums(const Polynomial& p, const Polynomial& q,
                                                 unsigned r, unsigned n, HurstIndex H,
                                                 unsigned threads = 1);
/// Exact value at finite d, or the limit when d is empty.
double riemann_integrand_moment(const Polynomial& p, const Polynomial& q, unsigned r, unsigned n,
                                HurstIndex H, std::optional<unsigned> d, unsigned threads = 1);

}  // namespace hfbm

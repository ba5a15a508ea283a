#pragma once

#include <memory>
#include <vector>

#include "hfbm/algebra.hpp"
#include "hfbm/error.hpp"
#include "hfbm/levy_area.hpp"

namespace hfbm {

/// A (x) A valued path U with derivative parts U1, U2 in A (x) A (x) A,
/// sampled at the points of one dyadic grid.
struct ControlledBiprocess {
  DyadicGrid grid;
  std::size_t dim;
  std::vector<Tensor2List> value;
  std::vector<Tensor3> d1;
  std::vector<Tensor3> d2;
};

/// U = P(X) (x) Q(X), U1 = dP(X) (x) Q(X), U2 = P(X) (x) dQ(X) at the points
/// of the level-`level` grid.
ControlledBiprocess polynomial_biprocess(const Polynomial& p, const Polynomial& q,
                                         const HermitianPath& x, unsigned level);

/// Constant biprocess U = A (x) B with vanishing derivatives.
ControlledBiprocess constant_biprocess(const Matrix& a, const Matrix& b, unsigned level);

/// dU_st - dX_st # U1_s - U2_s # dX_st for grid indices a <= b of W.
Tensor2 remainder(const ControlledBiprocess& w, const HermitianPath& x, std::size_t a, std::size_t b);

/// Path X together with its product Levy area.
class RoughDriver {
 public:
  explicit RoughDriver(std::shared_ptr<const LevyArea2> area);
  RoughDriver(const ScalarPathBundle& bundle, unsigned coarse_level, AreaMode mode);

  const LevyArea2& area() const noexcept { return product_.area(); }
  const ProductLevyArea& product() const noexcept { return product_; }
  unsigned level() const noexcept { return area().coarse().level(); }

 private:
  ProductLevyArea product_;
};

/// sum_i U_ti # dX + [X x Id](U1_ti) + [Id x X*](U2_ti) over the level-`level`
/// partition of [s, t].
Matrix corrected_riemann_sum(const ControlledBiprocess& w, const RoughDriver& driver, unsigned level,
                             double s, double t);

struct IntegralReport {
  Matrix value;
  std::vector<unsigned> levels;
  std::vector<Matrix> sums;
  std::vector<double> deltas;  // ||S_p - S_{p-1}|| / ||S_p|| for p >= 1
  int stable_level = -1;
};

class NonConvergence : public NumericError {
 public:
  NonConvergence(const std::string& what, IntegralReport report)
      : NumericError(what), report_(std::move(report)) {}
  const IntegralReport& report() const noexcept { return report_; }

 private:
  IntegralReport report_;
};

/// Refines dyadic partitions of [s, t] up to the common level of W and the
/// driver until successive corrected sums differ by at most tol_rel.
IntegralReport rough_integrate(const ControlledBiprocess& w, const RoughDriver& driver, double s,
                               double t, double tol_rel = 1e-4);

/// Entry (i, j) of the corrected sum, computed as a classical controlled
/// rough integral of the d^2-dimensional integrand U((i,k),(l,j)).
Complex componentwise_integral(const ControlledBiprocess& w, const RoughDriver& driver,
                               unsigned level, double s, double t, std::size_t i, std::size_t j);
/// Whole matrix from componentwise_integral.
Matrix componentwise_integral(const ControlledBiprocess& w, const RoughDriver& driver,
                              unsigned level, double s, double t);

/// Left-point sum of P(X) dX Q(X) on the grid of x.
Matrix ito_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H);
/// Trapezoid sum (P(X_m) dX Q(X_m) + P(X_m+1) dX Q(X_m+1)) / 2 on the grid of x.
Matrix strato_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H);
/// Left-point sum without the Brownian check, any Hurst index.
Matrix left_riemann_sum(const Polynomial& p, const Polynomial& q, const HermitianPath& x);

/// (1/2) int_0^1 [Id x Tr_d x Id](dP(X) (x) Q(X) + P(X) (x) dQ(X)) du, trapezoid in time.
Matrix strato_correction(const Polynomial& p, const Polynomial& q, const HermitianPath& x);

/// ||S - I - C|| / max(||S - I||, ||C||); 0 when the numerator vanishes.
double ito_strato_check(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H);

/// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(unsigned n);

/// Integral against the piecewise-linear interpolation of X on the level-n grid.
Matrix wong_zakai_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x,
                           unsigned level);

}  // namespace hfbm

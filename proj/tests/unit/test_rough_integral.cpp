#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "hfbm/error.hpp"
#include "hfbm/experiment.hpp"
#include "hfbm/rough_integral.hpp"
#include "test_support.hpp"

using namespace hfbm;
using hfbm::testing::random_hermitian;

namespace {

ScalarPathBundle bundle_for(double h, std::size_t d, unsigned level, std::uint64_t seed) {
  return ScalarPathBundle::sample(FbmSampler(HurstIndex(h), DyadicGrid(level)), d, seed);
}

RoughDriver driver_for(const HermitianPath& fine, unsigned coarse, AreaMode mode) {
  return RoughDriver(std::make_shared<const LevyArea2>(LevyArea2::lift(fine, coarse, mode)));
}

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST(Biprocess, PolynomialValues) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.7, 2, 6, 1));
  const Polynomial p{1.0, 0.0, 2.0};
  const Polynomial q{0.0, 1.0};
  const ControlledBiprocess w = polynomial_biprocess(p, q, x, 3);
  ASSERT_EQ(w.value.size(), 9u);
  for (std::size_t k = 0; k < 9; ++k) {
    const Matrix xk = x.at(w.grid.point(k));
    const Tensor2 expected = Tensor2::simple(identity(2) + 2.0 * xk * xk, xk);
    EXPECT_LE((densify(w.value[k]).coeffs() - expected.coeffs()).norm(), 1e-12);
    const Tensor3Dense d1 = densify(w.d1[k]);
    const Tensor3Dense d1_expected = densify(tensor(nc_derivative(p, xk), q(xk)));
    ASSERT_EQ(d1.coeffs.size(), d1_expected.coeffs.size());
    for (std::size_t c = 0; c < d1.coeffs.size(); ++c) EXPECT_LE(std::abs(d1.coeffs[c] - d1_expected.coeffs[c]), 1e-12);
  }
  EXPECT_THROW(polynomial_biprocess(p, q, x, 7), DomainError);
}

TEST(Biprocess, RemainderVanishesForLinearIntegrand) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.6, 3, 8, 2));
  const ControlledBiprocess w = polynomial_biprocess(Polynomial{0.0, 1.0}, Polynomial{1.0}, x, 4);
  for (std::size_t a = 0; a < 16; a += 3) EXPECT_LE(remainder(w, x, a, 16).norm(), 1e-12);
}

TEST(Biprocess, RemainderSlope) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.7, 2, 12, 3));
  const ControlledBiprocess w = polynomial_biprocess(Polynomial{0.0, 0.0, 1.0}, Polynomial{0.0, 1.0}, x, 8);
  std::vector<double> lengths, norms;
  for (unsigned gap = 0; gap <= 6; ++gap) {
    const std::size_t step = std::size_t{1} << gap;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a + step <= 256; a += step) {
      sum += remainder(w, x, a, a + step).norm();
      ++count;
    }
    lengths.push_back(std::ldexp(static_cast<double>(step), -8));
    norms.push_back(sum / static_cast<double>(count));
  }
  EXPECT_GE(log_log_slope(lengths, norms), 1.2);
}

TEST(CorrectedSum, ConstantIntegrand) {
  std::mt19937_64 rng(4);
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 3, 10, 4));
  const Matrix a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
  const ControlledBiprocess w = constant_biprocess(a, b, 6);
  const Matrix expected = a * (x.at(0.75) - x.at(0.125)) * b;
  for (auto mode : {AreaMode::LeftPoint, AreaMode::Trapezoid}) {
    const RoughDriver driver = driver_for(x, 6, mode);
    for (unsigned level = 3; level <= 6; ++level)
      EXPECT_LE(rel(corrected_riemann_sum(w, driver, level, 0.125, 0.75), expected), 1e-12);
    EXPECT_EQ(corrected_riemann_sum(w, driver, 6, 0.5, 0.5).norm(), 0.0);
  }
}

TEST(CorrectedSum, RejectsBadArguments) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 2, 8, 5));
  const ControlledBiprocess w = constant_biprocess(identity(2), identity(2), 4);
  const RoughDriver driver = driver_for(x, 4, AreaMode::Trapezoid);
  EXPECT_THROW(corrected_riemann_sum(w, driver, 5, 0.0, 1.0), DomainError);
  EXPECT_THROW(corrected_riemann_sum(w, driver, 2, 0.75, 0.25), DomainError);
  EXPECT_THROW(corrected_riemann_sum(w, driver, 2, 0.0, 0.3), DomainError);
}

TEST(CorrectedSum, LinearIntegrandMatchesFineSums) {
  const HurstIndex H(0.5);
  const HermitianPath x = assemble_hfbm(bundle_for(0.5, 3, 10, 6));
  const Polynomial p{0.0, 1.0}, q{1.0};
  const ControlledBiprocess w = polynomial_biprocess(p, q, x, 4);
  const Matrix left = corrected_riemann_sum(w, driver_for(x, 4, AreaMode::LeftPoint), 4, 0.0, 1.0);
  const Matrix trap = corrected_riemann_sum(w, driver_for(x, 4, AreaMode::Trapezoid), 4, 0.0, 1.0);
  EXPECT_LE(rel(left, ito_integral(p, q, x, H)), 1e-12);
  EXPECT_LE(rel(trap, strato_integral(p, q, x, H)), 1e-12);
}

TEST(CorrectedSum, LeftPointAtFineLevelIsItoSum) {
  const HurstIndex H(0.5);
  const HermitianPath x = assemble_hfbm(bundle_for(0.5, 3, 7, 7));
  const Polynomial p{0.0, 0.0, 1.0}, q{1.0, 1.0};
  const ControlledBiprocess w = polynomial_biprocess(p, q, x, 7);
  const Matrix rough = corrected_riemann_sum(w, driver_for(x, 7, AreaMode::LeftPoint), 7, 0.0, 1.0);
  EXPECT_LE(rel(rough, ito_integral(p, q, x, H)), 1e-12);
}

TEST(CorrectedSum, ScalarItoOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const HermitianPath x = assemble_hfbm(bundle_for(0.5, 1, 14, 10 + seed));
    const Polynomial p{0.0, 1.0}, q{1.0};
    const Matrix ito = corrected_riemann_sum(polynomial_biprocess(p, q, x, 6),
                                             driver_for(x, 6, AreaMode::LeftPoint), 6, 0.0, 1.0);
    const double x1 = x.at(1.0)(0, 0).real();
    EXPECT_NEAR(ito(0, 0).real(), 0.5 * (x1 * x1 - 1.0), 2.0 * std::pow(std::ldexp(1.0, -14), 0.4));
  }
}

TEST(CorrectedSum, AdjointSwapsFactors) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 3, 10, 8));
  const Polynomial p{1.0, 0.0, 1.0}, q{0.0, 2.0};
  for (auto mode : {AreaMode::LeftPoint, AreaMode::Trapezoid}) {
    const RoughDriver driver = driver_for(x, 6, mode);
    const Matrix pq = corrected_riemann_sum(polynomial_biprocess(p, q, x, 6), driver, 5, 0.0, 1.0);
    const Matrix qp = corrected_riemann_sum(polynomial_biprocess(q, p, x, 6), driver, 5, 0.0, 1.0);
    EXPECT_LE(rel(pq.adjoint(), qp), 1e-12);
  }
}

TEST(RoughIntegrate, ConstantStabilizesImmediately) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 2, 8, 9));
  const IntegralReport report =
      rough_integrate(constant_biprocess(identity(2), identity(2), 5), driver_for(x, 5, AreaMode::Trapezoid), 0.0, 1.0);
  EXPECT_EQ(report.stable_level, 0);
  EXPECT_LE(rel(report.value, x.at(1.0)), 1e-12);
  EXPECT_EQ(report.levels.front(), 0u);
}

TEST(RoughIntegrate, StartsAtIntervalLevel) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 2, 8, 9));
  const IntegralReport report = rough_integrate(constant_biprocess(identity(2), identity(2), 5),
                                                driver_for(x, 5, AreaMode::Trapezoid), 0.25, 0.5);
  EXPECT_EQ(report.levels.front(), 2u);
}

TEST(RoughIntegrate, NonConvergenceCarriesReport) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 2, 8, 10));
  const ControlledBiprocess w = polynomial_biprocess(Polynomial{0.0, 0.0, 1.0}, Polynomial{0.0, 1.0}, x, 4);
  try {
    rough_integrate(w, driver_for(x, 4, AreaMode::Trapezoid), 0.0, 1.0, 1e-300);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.report().sums.size(), 5u);
    EXPECT_EQ(e.report().stable_level, -1);
  }
}

TEST(RoughIntegrate, CauchyDeltasShrink) {
  const Polynomial p{0.0, 1.0}, q{0.0, 1.0};
  std::vector<double> early, late;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HermitianPath x = assemble_hfbm(bundle_for(0.4, 2, 12, 20 + seed));
    const RoughDriver driver = driver_for(x, 8, AreaMode::Trapezoid);
    IntegralReport report;
    try {
      report = rough_integrate(polynomial_biprocess(p, q, x, 8), driver, 0.0, 1.0, 1e-300);
    } catch (const NonConvergence& e) {
      report = e.report();
    }
    ASSERT_EQ(report.deltas.size(), 8u);
    early.push_back(report.deltas[1]);
    late.push_back(report.deltas.back());
  }
  EXPECT_LT(median(late), median(early));
}

TEST(Componentwise, AgreesWithProductForm) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.7, 3, 10, 11));
  const Polynomial p{0.0, 0.0, 1.0}, q{0.0, 0.0, 1.0};
  const ControlledBiprocess w = polynomial_biprocess(p, q, x, 4);
  for (auto mode : {AreaMode::LeftPoint, AreaMode::Trapezoid}) {
    const RoughDriver driver = driver_for(x, 4, mode);
    for (unsigned level = 0; level <= 4; ++level) {
      const Matrix a = corrected_riemann_sum(w, driver, level, 0.0, 1.0);
      const Matrix b = componentwise_integral(w, driver, level, 0.0, 1.0);
      for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
          EXPECT_LE(std::abs(a(i, j) - b(i, j)), 1e-10 * std::max(1.0, std::abs(a(i, j))));
    }
  }
}

TEST(ItoStrato, RequireBrownian) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.7, 2, 6, 12));
  EXPECT_THROW(ito_integral(Polynomial{0.0, 1.0}, Polynomial{1.0}, x, HurstIndex(0.7)), DomainError);
  EXPECT_THROW(strato_integral(Polynomial{0.0, 1.0}, Polynomial{1.0}, x, HurstIndex(0.7)), DomainError);
  EXPECT_NO_THROW(left_riemann_sum(Polynomial{0.0, 1.0}, Polynomial{1.0}, x));
}

TEST(ItoStrato, ScalarExamples) {
  const HurstIndex H(0.5);
  const HermitianPath x = assemble_hfbm(bundle_for(0.5, 1, 10, 13));
  const double x1 = x.at(1.0)(0, 0).real();
  double qv = 0.0;
  for (std::size_t m = 0; m + 1 < x.size(); ++m) qv += std::norm(x.entry(m + 1, 0, 0) - x.entry(m, 0, 0));
  const Polynomial p{0.0, 1.0}, q{1.0};
  EXPECT_NEAR(strato_integral(p, q, x, H)(0, 0).real(), 0.5 * x1 * x1, 1e-12);
  EXPECT_NEAR(ito_integral(p, q, x, H)(0, 0).real(), 0.5 * (x1 * x1 - qv), 1e-12);
}

TEST(ItoStrato, CorrectionExamples) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.5, 3, 6, 14));
  EXPECT_LE(rel(strato_correction(Polynomial{0.0, 1.0}, Polynomial{1.0}, x), 0.5 * identity(3)), 1e-14);
  Matrix avg = Matrix::Zero(3, 3);
  for (std::size_t m = 0; m + 1 < x.size(); ++m) avg += 0.5 * (x.at_index(m) + x.at_index(m + 1)) / 64.0;
  EXPECT_LE(rel(strato_correction(Polynomial{0.0, 1.0}, Polynomial{0.0, 1.0}, x), avg), 1e-12);
  // Tr(X) enters through the middle factor for P = X^2.
  Matrix expected = Matrix::Zero(3, 3);
  for (std::size_t m = 0; m + 1 < x.size(); ++m) {
    for (std::size_t e : {m, m + 1}) {
      const Matrix xe = x.at_index(e);
      expected += 0.25 / 64.0 * (xe + trace_normalized(xe) * identity(3));
    }
  }
  EXPECT_LE(rel(strato_correction(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0}, x), expected), 1e-12);
}

TEST(ItoStrato, ResidualShrinksWithMesh) {
  const HurstIndex H(0.5);
  const Polynomial p{0.0, 1.0}, q{0.0, 1.0};
  std::vector<double> coarse, fine;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HermitianPath x = assemble_hfbm(bundle_for(0.5, 3, 12, 30 + seed));
    coarse.push_back(ito_strato_check(p, q, x.restrict_to(6), H));
    fine.push_back(ito_strato_check(p, q, x, H));
  }
  EXPECT_LT(median(fine), median(coarse));
  EXPECT_LT(median(fine), 0.2);
}

TEST(WongZakai, ScalarIsExact) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.4, 1, 8, 15));
  const double x1 = x.at(1.0)(0, 0).real();
  for (unsigned k = 0; k <= 4; ++k) {
    const Matrix z = wong_zakai_integral(Polynomial::monomial(k), Polynomial{1.0}, x, 5);
    EXPECT_NEAR(z(0, 0).real(), std::pow(x1, k + 1) / (k + 1), 1e-10);
  }
}

TEST(WongZakai, LinearIsStratonovichSum) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.5, 3, 8, 16));
  const Polynomial p{0.0, 1.0}, q{1.0};
  EXPECT_LE(rel(wong_zakai_integral(p, q, x, 5), strato_integral(p, q, x.restrict_to(5), HurstIndex(0.5))), 1e-12);
}

TEST(WongZakai, QuadraticSegmentOracle) {
  const HermitianPath x = assemble_hfbm(bundle_for(0.7, 2, 4, 17));
  Matrix expected = Matrix::Zero(2, 2);
  for (std::size_t m = 0; m < 4; ++m) {
    const Matrix a = x.at_index(4 * m), dx = x.at_index(4 * m + 4) - a;
    expected += a * a * dx + 0.5 * (a * dx + dx * a) * dx + dx * dx * dx / 3.0;
  }
  EXPECT_LE(rel(wong_zakai_integral(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0}, x, 2), expected), 1e-12);
}

TEST(GaussLegendre, ExactOnPolynomials) {
  for (unsigned n = 1; n <= 8; ++n) {
    const Quadrature rule = gauss_legendre(n);
    ASSERT_EQ(rule.nodes.size(), n);
    for (unsigned m = 0; m < 2 * n; ++m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], m);
      EXPECT_NEAR(sum, 1.0 / (m + 1), 1e-14) << "n=" << n << " m=" << m;
    }
  }
}

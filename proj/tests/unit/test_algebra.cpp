#include <gtest/gtest.h>

#include <random>

#include "hfbm/algebra.hpp"
#include "hfbm/error.hpp"
#include "test_support.hpp"

using namespace hfbm;
using hfbm::testing::random_matrix;
using hfbm::testing::random_tensor2;

namespace {

double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }
double dist(const Tensor2& a, const Tensor2& b) { return (a.coeffs() - b.coeffs()).norm(); }

Tensor2List simple_list(const Matrix& u, const Matrix& v) {
  Tensor2List t(static_cast<std::size_t>(u.rows()));
  t.add(1.0, u, v);
  return t;
}

// Central finite difference of X -> P(X) in direction E.
Matrix directional(const Polynomial& p, const Matrix& x, const Matrix& e, double h = 1e-5) {
  return (p(Matrix(x + h * e)) - p(Matrix(x - h * e))) / (2 * h);
}

}  // namespace

TEST(Trace, Examples) {
  EXPECT_EQ(trace_normalized(identity(3)), Complex(1.0));
  EXPECT_EQ(trace_normalized(unit(4, 0, 0)), Complex(0.25));
  EXPECT_EQ(trace_normalized(unit(4, 0, 1)), Complex(0.0));
}

TEST(Sharp21, IdentityAndMatrixUnits) {
  std::mt19937_64 rng(1);
  const Matrix y = random_matrix(rng, 3);
  EXPECT_LE(dist(sharp(simple_list(identity(3), identity(3)), y), y), 1e-15);
  EXPECT_LE(dist(sharp(Tensor2::simple(identity(3), identity(3)), y), y), 1e-15);
  const Matrix r = sharp(simple_list(unit(4, 0, 1), unit(4, 2, 3)), unit(4, 1, 2));
  EXPECT_EQ(r, unit(4, 0, 3));
  EXPECT_EQ(sharp(Tensor2::simple(unit(4, 0, 1), unit(4, 2, 3)), unit(4, 1, 2)), unit(4, 0, 3));
}

TEST(Sharp21, SimpleAgreesWithDense) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3), y = random_matrix(rng, 3);
    const Matrix direct = a * y * b;
    EXPECT_LE(dist(sharp(Tensor2::simple(a, b), y), direct), 1e-12 * direct.norm());
    EXPECT_LE(dist(sharp(y, simple_list(a, b)), direct), 1e-12 * direct.norm());
  }
}

TEST(Sharp21, DimensionMismatchThrows) {
  EXPECT_THROW(sharp(Tensor2(3), identity(2)), DomainError);
  EXPECT_THROW(sharp(simple_list(identity(3), identity(3)), identity(2)), DomainError);
}

TEST(Sharp13, IdentityCases) {
  std::mt19937_64 rng(3);
  const Matrix y = random_matrix(rng, 3);
  Tensor3 ones(3);
  ones.add(1.0, identity(3), identity(3), identity(3));
  EXPECT_LE(dist(densify(sharp(y, ones)), Tensor2::simple(y, identity(3))), 1e-14);
  EXPECT_LE(dist(densify(sharp(ones, y)), Tensor2::simple(identity(3), y)), 1e-14);
}

TEST(Sharp13, Bilinearity) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    Tensor3 t(3), t2(3);
    t.add(Complex(0.5, -1.0), random_matrix(rng, 3), random_matrix(rng, 3), random_matrix(rng, 3));
    t2.add(2.0, random_matrix(rng, 3), random_matrix(rng, 3), random_matrix(rng, 3));
    const Matrix y = random_matrix(rng, 3);
    const Tensor2 lhs = densify(sharp(y, t + t2));
    const Tensor2 rhs = densify(sharp(y, t)) + densify(sharp(y, t2));
    EXPECT_LE(dist(lhs, rhs), 1e-12 * lhs.norm());
    const Tensor2 lhs2 = densify(sharp(t + t2, y));
    const Tensor2 rhs2 = densify(sharp(t, y)) + densify(sharp(t2, y));
    EXPECT_LE(dist(lhs2, rhs2), 1e-12 * lhs2.norm());
  }
}

TEST(Sharp, LevelAssociativity) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Matrix u1 = random_matrix(rng, 3), u2 = random_matrix(rng, 3), u3 = random_matrix(rng, 3);
    const Matrix y = random_matrix(rng, 3), z = random_matrix(rng, 3);
    Tensor3 t(3);
    t.add(1.0, u1, u2, u3);
    const Matrix expected = u1 * y * u2 * z * u3;
    EXPECT_LE(dist(sharp(sharp(y, t), z), expected), 1e-12 * expected.norm());
    const Matrix expected2 = u1 * z * u2 * y * u3;
    EXPECT_LE(dist(sharp(sharp(t, y), z), expected2), 1e-12 * expected2.norm());
  }
}

TEST(Sharp, FrobeniusBound) {
  std::mt19937_64 rng(6);
  for (std::size_t d = 1; d <= 4; ++d)
    for (int k = 0; k < 20; ++k) {
      const Matrix u = random_matrix(rng, d), v = random_matrix(rng, d), y = random_matrix(rng, d);
      EXPECT_LE(sharp(simple_list(u, v), y).norm(), u.norm() * y.norm() * v.norm() * (1 + 1e-12));
    }
}

TEST(Tensor2, DensifyDecomposeRoundTrip) {
  std::mt19937_64 rng(7);
  const Tensor2 t = random_tensor2(rng, 3);
  EXPECT_LE(dist(densify(decompose(t)), t), 1e-13);
  Tensor2List list(2);
  list.add(Complex(1, 2), random_matrix(rng, 2), random_matrix(rng, 2));
  list.add(-3.0, random_matrix(rng, 2), random_matrix(rng, 2));
  const Tensor2 dense = densify(list);
  EXPECT_LE(dist(densify(decompose(dense)), dense), 1e-12);
  const Matrix y = random_matrix(rng, 2);
  EXPECT_LE(dist(sharp(list, y), sharp(dense, y)), 1e-12);
}

TEST(Tensor2, IndexConvention) {
  const Tensor2 t = Tensor2::simple(unit(3, 0, 1), unit(3, 2, 0));
  EXPECT_EQ(t(0, 1, 2, 0), Complex(1.0));
  EXPECT_EQ(t.coeffs().cwiseAbs().sum(), 1.0);
}

TEST(NcDerivative, Examples) {
  std::mt19937_64 rng(8);
  const Matrix x = random_matrix(rng, 3);
  EXPECT_TRUE(nc_derivative(Polynomial{4.0}, x).empty());
  EXPECT_LE(dist(densify(nc_derivative(Polynomial{0.0, 1.0}, x)), Tensor2::simple(identity(3), identity(3))), 0.0);
  const Tensor2 sq = densify(nc_derivative(Polynomial{0.0, 0.0, 1.0}, x));
  const Tensor2 expected = Tensor2::simple(x, identity(3)) + Tensor2::simple(identity(3), x);
  EXPECT_LE(dist(sq, expected), 1e-13);
}

TEST(NcDerivative, CubeMatchesFiniteDifferenceAtDiagonalPoint) {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 0.7;
  x(1, 1) = -1.3;
  const Polynomial cube = Polynomial::monomial(3);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    const Matrix e = random_matrix(rng, 2);
    EXPECT_LE(dist(sharp(nc_derivative(cube, x), e), directional(cube, x, e)), 1e-6);
  }
}

TEST(NcDerivative, LeibnizAgainstFiniteDifferences) {
  std::mt19937_64 rng(10);
  for (unsigned m = 1; m <= 5; ++m) {
    const Matrix x = 0.5 * random_matrix(rng, 3);
    const Matrix e = random_matrix(rng, 3);
    const Polynomial p = Polynomial::monomial(m);
    const Matrix fd = directional(p, x, e);
    EXPECT_LE(dist(sharp(nc_derivative(p, x), e), fd), 1e-6 * (1 + fd.norm())) << "m=" << m;
  }
  const Polynomial mixed{1.0, -2.0, 0.5, 3.0};
  const Matrix x = 0.5 * random_matrix(rng, 3), e = random_matrix(rng, 3);
  EXPECT_LE(dist(sharp(nc_derivative(mixed, x), e), directional(mixed, x, e)), 1e-6 * (1 + x.norm()));
}

TEST(IdTrId, Examples) {
  Tensor3 ones(3);
  ones.add(1.0, identity(3), identity(3), identity(3));
  EXPECT_LE(dist(id_tr_id(ones), identity(3)), 1e-15);
  Tensor3 e(2);
  e.add(1.0, unit(2, 0, 0), unit(2, 0, 0), unit(2, 0, 0));
  EXPECT_LE(dist(id_tr_id(e), 0.5 * unit(2, 0, 0)), 1e-15);
  const Tensor3 d_sq = tensor(nc_derivative(Polynomial::monomial(2), identity(3)), identity(3));
  EXPECT_LE(dist(id_tr_id(d_sq), 2.0 * identity(3)), 1e-14);
}

TEST(IdTrId, TraceIdentityAndLinearity) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const Matrix u1 = random_matrix(rng, 3), u2 = random_matrix(rng, 3), u3 = random_matrix(rng, 3);
    Tensor3 t(3);
    t.add(1.0, u1, u2, u3);
    const Complex lhs = trace_normalized(id_tr_id(t));
    const Complex rhs = trace_normalized(u2) * trace_normalized(u1 * u3);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs)));
    Tensor3 t2(3);
    t2.add(Complex(0, 2), u3, u1, u2);
    const Matrix sum = id_tr_id(t + t2);
    EXPECT_LE(dist(sum, id_tr_id(t) + id_tr_id(t2)), 1e-12 * sum.norm());
  }
}

TEST(Dual, Examples) {
  const Tensor2 id = Tensor2::simple(identity(3), identity(3));
  EXPECT_LE(dist(dual(id), id), 0.0);
  const Tensor2 t = Tensor2::simple(unit(4, 0, 1), unit(4, 2, 3));
  EXPECT_LE(dist(dual(t), Tensor2::simple(unit(4, 3, 2), unit(4, 1, 0))), 0.0);
}

TEST(Dual, InvolutionAndListAgreement) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const Tensor2 t = random_tensor2(rng, 3);
    EXPECT_LE(dist(dual(dual(t)), t), 1e-14);
    Tensor2List list(3);
    list.add(Complex(0.3, -0.8), random_matrix(rng, 3), random_matrix(rng, 3));
    EXPECT_LE(dist(densify(dual(list)), dual(densify(list))), 1e-12);
  }
}

TEST(Polynomial, EvaluationAndDerivative) {
  const Polynomial p{1.0, 0.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 2u);
  EXPECT_EQ(p.coeffs().size(), 3u);
  EXPECT_TRUE(Polynomial({0.0, 0.0}).is_zero());
  EXPECT_EQ(p(Complex(2.0)), Complex(9.0));
  std::mt19937_64 rng(13);
  const Matrix x = random_matrix(rng, 3);
  EXPECT_LE(dist(p(x), identity(3) + 2.0 * x * x), 1e-12);
  const Polynomial dp = p.derivative();
  ASSERT_EQ(dp.degree(), 1u);
  EXPECT_EQ(dp.coeffs()[1], Complex(4.0));
  EXPECT_TRUE(Polynomial{3.0}.derivative().is_zero());
}

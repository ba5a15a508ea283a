#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace hfbm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

Matrix identity(std::size_t d);
/// Matrix unit E_ij (0-based indices).
Matrix unit(std::size_t d, std::size_t i, std::size_t j);

/// Frobenius norm, sqrt(sum |U(i,j)|^2).
double frobenius(const Matrix& m);

/// Tr_d(A) = (1/d) sum_i A(i,i).
Complex trace_normalized(const Matrix& a);

/// Element of A (x) A in the canonical basis: coefficient of E_ij (x) E_kl
/// stored at coeffs(i*d + j, k*d + l).
class Tensor2 {
 public:
  explicit Tensor2(std::size_t d);
  Tensor2(std::size_t d, Eigen::MatrixXcd coeffs);

  static Tensor2 simple(const Matrix& u, const Matrix& v);

  std::size_t dim() const noexcept { return dim_; }
  const Eigen::MatrixXcd& coeffs() const noexcept { return coeffs_; }
  Eigen::MatrixXcd& coeffs() noexcept { return coeffs_; }

  Complex operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return coeffs_(static_cast<Eigen::Index>(i * dim_ + j), static_cast<Eigen::Index>(k * dim_ + l));
  }
  Complex& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return coeffs_(static_cast<Eigen::Index>(i * dim_ + j), static_cast<Eigen::Index>(k * dim_ + l));
  }

  double norm() const { return coeffs_.norm(); }

  Tensor2& operator+=(const Tensor2& other);
  Tensor2& operator-=(const Tensor2& other);
  Tensor2& operator*=(Complex w);
  friend Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
  friend Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
  friend Tensor2 operator*(Complex w, Tensor2 a) { return a *= w; }

 private:
  std::size_t dim_;
  Eigen::MatrixXcd coeffs_;
};

struct SimpleTensor2 {
  Complex weight;
  Matrix left;
  Matrix right;
};

/// Weighted sum of simple tensors U (x) V.
class Tensor2List {
 public:
  explicit Tensor2List(std::size_t d) : dim_(d) {}

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<SimpleTensor2>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add(Complex weight, Matrix left, Matrix right);
  Tensor2List& operator+=(const Tensor2List& other);
  Tensor2List& operator*=(Complex w);
  friend Tensor2List operator+(Tensor2List a, const Tensor2List& b) { return a += b; }
  friend Tensor2List operator*(Complex w, Tensor2List a) { return a *= w; }

 private:
  std::size_t dim_;
  std::vector<SimpleTensor2> terms_;
};

struct SimpleTensor3 {
  Complex weight;
  Matrix a;
  Matrix b;
  Matrix c;
};

/// Element of A (x) A (x) A kept as a weighted list of simple tensors.
class Tensor3 {
 public:
  explicit Tensor3(std::size_t d) : dim_(d) {}

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<SimpleTensor3>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add(Complex weight, Matrix a, Matrix b, Matrix c);
  Tensor3& operator+=(const Tensor3& other);
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }

 private:
  std::size_t dim_;
  std::vector<SimpleTensor3> terms_;
};

/// Dense coefficients of a Tensor3; entry ((i,j),(k,l),(m,n)) at
/// ((i*d + j)*d*d + k*d + l)*d*d + m*d + n. Only meant for small d.
struct Tensor3Dense {
  std::size_t dim;
  std::vector<Complex> coeffs;

  Complex operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t m,
                     std::size_t n) const {
    const std::size_t d = dim;
    return coeffs[((i * d + j) * d * d + k * d + l) * d * d + m * d + n];
  }
};

Tensor2 densify(const Tensor2List& t);
Tensor3Dense densify(const Tensor3& t);
/// Expansion over matrix units, one term per nonzero coefficient.
Tensor2List decompose(const Tensor2& t);

/// (U (x) V) # Y = U Y V, extended linearly.
Matrix sharp(const Tensor2& t, const Matrix& y);
Matrix sharp(const Tensor2List& t, const Matrix& y);
inline Matrix sharp(const Matrix& y, const Tensor2& t) { return sharp(t, y); }
inline Matrix sharp(const Matrix& y, const Tensor2List& t) { return sharp(t, y); }

/// Y # (U1 (x) U2 (x) U3) = (U1 Y U2) (x) U3.
Tensor2List sharp(const Matrix& y, const Tensor3& t);
/// (U1 (x) U2 (x) U3) # Y = U1 (x) (U2 Y U3).
Tensor2List sharp(const Tensor3& t, const Matrix& y);

/// (U (x) V) (x) W.
Tensor3 tensor(const Tensor2List& t, const Matrix& w);
/// W (x) (U (x) V).
Tensor3 tensor(const Matrix& w, const Tensor2List& t);

/// U1 (x) U2 (x) U3 -> Tr_d(U2) U1 U3.
Matrix id_tr_id(const Tensor3& t);

/// U (x) V -> V* (x) U*, antilinear.
Tensor2 dual(const Tensor2& t);
Tensor2List dual(const Tensor2List& t);

/// Polynomial in one indeterminate with complex coefficients a_0..a_m.
/// Trailing zero coefficients are dropped; the zero polynomial has none.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial from_real(const std::vector<double>& coeffs);
  static Polynomial monomial(unsigned m);

  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; 0 for constants and for the zero polynomial.
  unsigned degree() const noexcept;
  bool has_real_coefficients() const noexcept;

  Complex operator()(Complex x) const;
  Matrix operator()(const Matrix& x) const;
  /// Ordinary derivative P'.
  Polynomial derivative() const;

 private:
  std::vector<Complex> coeffs_;
};

/// dP(X) = sum_m a_m sum_{i<m} X^i (x) X^{m-1-i}.
Tensor2List nc_derivative(const Polynomial& p, const Matrix& x);

/// Powers X^0..X^m.
std::vector<Matrix> powers(const Matrix& x, unsigned m);

}  // namespace hfbm

#include "hfbm/algebra.hpp"

#include <string>

#include "hfbm/error.hpp"

namespace hfbm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_dim(std::size_t expected, const Matrix& m, const char* what) {
  if (m.rows() != idx(expected) || m.cols() != idx(expected)) {
    throw DomainError(std::string(what) + ": expected a " + std::to_string(expected) + "x" +
                      std::to_string(expected) + " matrix, got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  }
}

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": dimension mismatch " + std::to_string(a) + " vs " +
                      std::to_string(b));
  }
}

}  // namespace

Matrix identity(std::size_t d) { return Matrix::Identity(idx(d), idx(d)); }

Matrix unit(std::size_t d, std::size_t i, std::size_t j) {
  if (i >= d || j >= d) throw DomainError("matrix unit index out of range");
  Matrix e = Matrix::Zero(idx(d), idx(d));
  e(idx(i), idx(j)) = 1.0;
  return e;
}

double frobenius(const Matrix& m) { return m.norm(); }

Complex trace_normalized(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("trace of a non-square matrix");
  return a.trace() / static_cast<double>(a.rows());
}

Tensor2::Tensor2(std::size_t d) : dim_(d), coeffs_(Eigen::MatrixXcd::Zero(idx(d * d), idx(d * d))) {}

Tensor2::Tensor2(std::size_t d, Eigen::MatrixXcd coeffs) : dim_(d), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != idx(d * d) || coeffs_.cols() != idx(d * d)) {
    throw DomainError("Tensor2 coefficient array must be d^2 x d^2");
  }
}

Tensor2 Tensor2::simple(const Matrix& u, const Matrix& v) {
  const auto d = static_cast<std::size_t>(u.rows());
  check_dim(d, u, "Tensor2::simple");
  check_dim(d, v, "Tensor2::simple");
  // Row-major vectorizations so that coeffs(i*d+j, k*d+l) = U(i,j) V(k,l).
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> ur = u;
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> vr = v;
  const Eigen::Map<const Eigen::VectorXcd> uv(ur.data(), idx(d * d));
  const Eigen::Map<const Eigen::VectorXcd> vv(vr.data(), idx(d * d));
  return Tensor2(d, uv * vv.transpose());
}

Tensor2& Tensor2::operator+=(const Tensor2& other) {
  check_same(dim_, other.dim_, "Tensor2 +");
  coeffs_ += other.coeffs_;
  return *this;
}

Tensor2& Tensor2::operator-=(const Tensor2& other) {
  check_same(dim_, other.dim_, "Tensor2 -");
  coeffs_ -= other.coeffs_;
  return *this;
}

Tensor2& Tensor2::operator*=(Complex w) {
  coeffs_ *= w;
  return *this;
}

void Tensor2List::add(Complex weight, Matrix left, Matrix right) {
  check_dim(dim_, left, "Tensor2List::add");
  check_dim(dim_, right, "Tensor2List::add");
  terms_.push_back({weight, std::move(left), std::move(right)});
}

Tensor2List& Tensor2List::operator+=(const Tensor2List& other) {
  check_same(dim_, other.dim_, "Tensor2List +");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Tensor2List& Tensor2List::operator*=(Complex w) {
  for (auto& t : terms_) t.weight *= w;
  return *this;
}

void Tensor3::add(Complex weight, Matrix a, Matrix b, Matrix c) {
  check_dim(dim_, a, "Tensor3::add");
  check_dim(dim_, b, "Tensor3::add");
  check_dim(dim_, c, "Tensor3::add");
  terms_.push_back({weight, std::move(a), std::move(b), std::move(c)});
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  check_same(dim_, other.dim_, "Tensor3 +");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Tensor2 densify(const Tensor2List& t) {
  Tensor2 out(t.dim());
  for (const auto& term : t.terms()) {
    out.coeffs() += term.weight * Tensor2::simple(term.left, term.right).coeffs();
  }
  return out;
}

Tensor3Dense densify(const Tensor3& t) {
  const std::size_t d = t.dim();
  const std::size_t d2 = d * d;
  Tensor3Dense out{d, std::vector<Complex>(d2 * d2 * d2)};
  for (const auto& term : t.terms()) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Complex wa = term.weight * term.a(idx(i), idx(j));
        if (wa == Complex{}) continue;
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) {
            const Complex wab = wa * term.b(idx(k), idx(l));
            for (std::size_t m = 0; m < d; ++m)
              for (std::size_t n = 0; n < d; ++n) {
                out.coeffs[((i * d + j) * d2 + k * d + l) * d2 + m * d + n] +=
                    wab * term.c(idx(m), idx(n));
              }
          }
      }
  }
  return out;
}

Tensor2List decompose(const Tensor2& t) {
  const std::size_t d = t.dim();
  Tensor2List out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const Complex w = t(i, j, k, l);
          if (w != Complex{}) out.add(w, unit(d, i, j), unit(d, k, l));
        }
  return out;
}

Matrix sharp(const Tensor2& t, const Matrix& y) {
  const std::size_t d = t.dim();
  check_dim(d, y, "sharp");
  Matrix out = Matrix::Zero(idx(d), idx(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t l = 0; l < d; ++l) {
      Complex acc{};
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) acc += t(i, j, k, l) * y(idx(j), idx(k));
      out(idx(i), idx(l)) = acc;
    }
  return out;
}

Matrix sharp(const Tensor2List& t, const Matrix& y) {
  check_dim(t.dim(), y, "sharp");
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  for (const auto& term : t.terms()) out.noalias() += term.weight * (term.left * y * term.right);
  return out;
}

Tensor2List sharp(const Matrix& y, const Tensor3& t) {
  check_dim(t.dim(), y, "sharp");
  Tensor2List out(t.dim());
  for (const auto& term : t.terms()) out.add(term.weight, term.a * y * term.b, term.c);
  return out;
}

Tensor2List sharp(const Tensor3& t, const Matrix& y) {
  check_dim(t.dim(), y, "sharp");
  Tensor2List out(t.dim());
  for (const auto& term : t.terms()) out.add(term.weight, term.a, term.b * y * term.c);
  return out;
}

Tensor3 tensor(const Tensor2List& t, const Matrix& w) {
  Tensor3 out(t.dim());
  for (const auto& term : t.terms()) out.add(term.weight, term.left, term.right, w);
  return out;
}

Tensor3 tensor(const Matrix& w, const Tensor2List& t) {
  Tensor3 out(t.dim());
  for (const auto& term : t.terms()) out.add(term.weight, w, term.left, term.right);
  return out;
}

Matrix id_tr_id(const Tensor3& t) {
  const auto d = idx(t.dim());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& term : t.terms()) {
    out.noalias() += (term.weight * trace_normalized(term.b)) * (term.a * term.c);
  }
  return out;
}

Tensor2 dual(const Tensor2& t) {
  const std::size_t d = t.dim();
  Tensor2 out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) out(l, k, j, i) = std::conj(t(i, j, k, l));
  return out;
}

Tensor2List dual(const Tensor2List& t) {
  Tensor2List out(t.dim());
  for (const auto& term : t.terms()) {
    out.add(std::conj(term.weight), term.right.adjoint(), term.left.adjoint());
  }
  return out;
}

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<Complex>(coeffs.begin(), coeffs.end())) {}

Polynomial Polynomial::from_real(const std::vector<double>& coeffs) {
  return Polynomial(std::vector<Complex>(coeffs.begin(), coeffs.end()));
}

Polynomial Polynomial::monomial(unsigned m) {
  std::vector<Complex> c(m + 1);
  c[m] = 1.0;
  return Polynomial(std::move(c));
}

unsigned Polynomial::degree() const noexcept {
  return coeffs_.empty() ? 0u : static_cast<unsigned>(coeffs_.size() - 1);
}

bool Polynomial::has_real_coefficients() const noexcept {
  for (const auto& c : coeffs_)
    if (c.imag() != 0.0) return false;
  return true;
}

Complex Polynomial::operator()(Complex x) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Matrix Polynomial::operator()(const Matrix& x) const {
  if (x.rows() != x.cols()) throw DomainError("polynomial of a non-square matrix");
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x;
    acc.diagonal().array() += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> c(coeffs_.size() - 1);
  for (std::size_t m = 1; m < coeffs_.size(); ++m) c[m - 1] = static_cast<double>(m) * coeffs_[m];
  return Polynomial(std::move(c));
}

std::vector<Matrix> powers(const Matrix& x, unsigned m) {
  std::vector<Matrix> out;
  out.reserve(m + 1);
  out.push_back(Matrix::Identity(x.rows(), x.cols()));
  for (unsigned k = 1; k <= m; ++k) out.push_back(out.back() * x);
  return out;
}

Tensor2List nc_derivative(const Polynomial& p, const Matrix& x) {
  const auto d = static_cast<std::size_t>(x.rows());
  check_dim(d, x, "nc_derivative");
  Tensor2List out(d);
  if (p.degree() == 0) return out;
  const auto pw = powers(x, p.degree() - 1);
  const auto& a = p.coeffs();
  // X^i (x) X^j carries a_{i+j+1}.
  for (unsigned i = 0; i < p.degree(); ++i)
    for (unsigned j = 0; i + j + 1 <= p.degree(); ++j) {
      const Complex w = a[i + j + 1];
      if (w != Complex{}) out.add(w, pw[i], pw[j]);
    }
  return out;
}

}  // namespace hfbm

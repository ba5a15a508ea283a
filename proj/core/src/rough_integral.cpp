#include "hfbm/rough_integral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hfbm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

struct Partition {
  std::size_t first;
  std::size_t last;
};

Partition partition_of(unsigned level, double s, double t) {
  if (s > t) throw DomainError("integration bounds must satisfy s <= t");
  const DyadicGrid grid(level);
  return {grid.index_of(s), grid.index_of(t)};
}

}  // namespace

ControlledBiprocess polynomial_biprocess(const Polynomial& p, const Polynomial& q,
                                         const HermitianPath& x, unsigned level) {
  if (level > x.grid().level()) throw DomainError("biprocess level exceeds the path level");
  const DyadicGrid grid(level);
  const std::size_t d = x.dim();
  ControlledBiprocess w{grid, d, {}, {}, {}};
  w.value.reserve(grid.size());
  w.d1.reserve(grid.size());
  w.d2.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Matrix xk = x.at_index(x.grid().refine_index(k, level));
    const Matrix pk = p(xk);
    const Matrix qk = q(xk);
    Tensor2List u(d);
    u.add(1.0, pk, qk);
    w.value.push_back(std::move(u));
    w.d1.push_back(tensor(nc_derivative(p, xk), qk));
    w.d2.push_back(tensor(pk, nc_derivative(q, xk)));
  }
  return w;
}

ControlledBiprocess constant_biprocess(const Matrix& a, const Matrix& b, unsigned level) {
  const DyadicGrid grid(level);
  const auto d = static_cast<std::size_t>(a.rows());
  ControlledBiprocess w{grid, d, {}, {}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Tensor2List u(d);
    u.add(1.0, a, b);
    w.value.push_back(std::move(u));
    w.d1.emplace_back(d);
    w.d2.emplace_back(d);
  }
  return w;
}

Tensor2 remainder(const ControlledBiprocess& w, const HermitianPath& x, std::size_t a, std::size_t b) {
  if (a > b || b >= w.grid.size()) throw DomainError("remainder indices out of range");
  const unsigned level = w.grid.level();
  const Matrix dx = x.increment(x.grid().refine_index(a, level), x.grid().refine_index(b, level));
  Tensor2 out = densify(w.value[b]) - densify(w.value[a]);
  out -= densify(sharp(dx, w.d1[a]));
  out -= densify(sharp(w.d2[a], dx));
  return out;
}

RoughDriver::RoughDriver(std::shared_ptr<const LevyArea2> area) : product_(std::move(area)) {}

RoughDriver::RoughDriver(const ScalarPathBundle& bundle, unsigned coarse_level, AreaMode mode)
    : product_(std::make_shared<const LevyArea2>(LevyArea2::lift(bundle, coarse_level, mode))) {}

Matrix corrected_riemann_sum(const ControlledBiprocess& w, const RoughDriver& driver, unsigned level,
                             double s, double t) {
  if (level > w.grid.level() || level > driver.level()) {
    throw DomainError("partition level " + std::to_string(level) +
                      " is finer than the biprocess or driver grid");
  }
  if (w.dim != driver.area().dim()) throw DomainError("biprocess and driver dimensions differ");
  const auto [first, last] = partition_of(level, s, t);
  const LevyArea2& area = driver.area();
  const auto d = idx(w.dim);
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = first; i < last; ++i) {
    const std::size_t wi = w.grid.refine_index(i, level);
    const std::size_t a = area.coarse().refine_index(i, level);
    const std::size_t b = area.coarse().refine_index(i + 1, level);
    const Matrix dx = area.increment(a, b);
    sum.noalias() += sharp(w.value[wi], dx);
    if (w.d1[wi].empty() && w.d2[wi].empty()) continue;
    const Tensor2 x2 = area.area(a, b);
    for (const auto& term : w.d1[wi].terms()) {
      sum.noalias() += term.weight * (term.a * contract_right(x2, term.b) * term.c);
    }
    for (const auto& term : w.d2[wi].terms()) {
      sum.noalias() += term.weight * (term.a * contract_right(x2, term.b.adjoint()).adjoint() * term.c);
    }
  }
  return sum;
}

IntegralReport rough_integrate(const ControlledBiprocess& w, const RoughDriver& driver, double s,
                               double t, double tol_rel) {
  const double times[] = {s, t};
  const unsigned start = dyadic_level_of(times);
  const unsigned top = std::min(w.grid.level(), driver.level());
  if (start > top) throw DomainError("integration bounds are not on the biprocess grid");
  IntegralReport report;
  for (unsigned p = start; p <= top; ++p) {
    report.levels.push_back(p);
    report.sums.push_back(corrected_riemann_sum(w, driver, p, s, t));
    report.value = report.sums.back();
    if (p == start) continue;
    const double num = (report.sums.back() - report.sums[report.sums.size() - 2]).norm();
    const double den = report.sums.back().norm();
    const double delta = num == 0.0 ? 0.0 : (den == 0.0 ? INFINITY : num / den);
    report.deltas.push_back(delta);
    if (delta <= tol_rel) {
      report.stable_level = static_cast<int>(p) - 1;
      return report;
    }
  }
  std::string msg = "corrected Riemann sums did not stabilize up to level " + std::to_string(top) + "; deltas:";
  for (double delta : report.deltas) msg += " " + std::to_string(delta);
  throw NonConvergence(msg, std::move(report));
}

Matrix componentwise_integral(const ControlledBiprocess& w, const RoughDriver& driver,
                              unsigned level, double s, double t) {
  if (level > w.grid.level() || level > driver.level()) {
    throw DomainError("partition level is finer than the biprocess or driver grid");
  }
  const auto [first, last] = partition_of(level, s, t);
  const LevyArea2& area = driver.area();
  const std::size_t d = w.dim;
  Matrix out = Matrix::Zero(idx(d), idx(d));
  for (std::size_t step = first; step < last; ++step) {
    const std::size_t wi = w.grid.refine_index(step, level);
    const std::size_t a = area.coarse().refine_index(step, level);
    const std::size_t b = area.coarse().refine_index(step + 1, level);
    const Matrix dx = area.increment(a, b);
    const Tensor2 x2 = area.area(a, b);
    const Tensor2 u = densify(w.value[wi]);
    const Tensor3Dense u1 = densify(w.d1[wi]);
    const Tensor3Dense u2 = densify(w.d2[wi]);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Complex acc{};
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) {
            acc += u(i, k, l, j) * dx(idx(k), idx(l));
            for (std::size_t m = 0; m < d; ++m)
              for (std::size_t n = 0; n < d; ++n) {
                const Complex deriv = u1(i, m, n, k, l, j) + u2(i, k, l, m, n, j);
                acc += deriv * x2(m, n, k, l);
              }
          }
        out(idx(i), idx(j)) += acc;
      }
  }
  return out;
}

Complex componentwise_integral(const ControlledBiprocess& w, const RoughDriver& driver,
                               unsigned level, double s, double t, std::size_t i, std::size_t j) {
  if (i >= w.dim || j >= w.dim) throw DomainError("componentwise_integral: index out of range");
  return componentwise_integral(w, driver, level, s, t)(idx(i), idx(j));
}

Matrix left_riemann_sum(const Polynomial& p, const Polynomial& q, const HermitianPath& x) {
  const auto d = idx(x.dim());
  Matrix sum = Matrix::Zero(d, d);
  Matrix current = x.at_index(0);
  for (std::size_t m = 0; m + 1 < x.size(); ++m) {
    Matrix next = x.at_index(m + 1);
    sum.noalias() += p(current) * (next - current) * q(current);
    current = std::move(next);
  }
  return sum;
}

Matrix ito_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H) {
  H.require_brownian();
  return left_riemann_sum(p, q, x);
}

Matrix strato_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H) {
  H.require_brownian();
  const auto d = idx(x.dim());
  Matrix sum = Matrix::Zero(d, d);
  Matrix current = x.at_index(0);
  Matrix pc = p(current);
  Matrix qc = q(current);
  for (std::size_t m = 0; m + 1 < x.size(); ++m) {
    Matrix next = x.at_index(m + 1);
    Matrix pn = p(next);
    Matrix qn = q(next);
    const Matrix dx = next - current;
    sum.noalias() += 0.5 * (pc * dx * qc + pn * dx * qn);
    current = std::move(next);
    pc = std::move(pn);
    qc = std::move(qn);
  }
  return sum;
}

Matrix strato_correction(const Polynomial& p, const Polynomial& q, const HermitianPath& x) {
  const auto d = idx(x.dim());
  auto integrand = [&](std::size_t k) {
    const Matrix xk = x.at_index(k);
    return Matrix(id_tr_id(tensor(nc_derivative(p, xk), q(xk)) + tensor(p(xk), nc_derivative(q, xk))));
  };
  Matrix sum = Matrix::Zero(d, d);
  Matrix prev = integrand(0);
  for (std::size_t k = 1; k < x.size(); ++k) {
    Matrix cur = integrand(k);
    sum.noalias() += 0.5 * (prev + cur);
    prev = std::move(cur);
  }
  return 0.5 * x.grid().mesh() * sum;
}

double ito_strato_check(const Polynomial& p, const Polynomial& q, const HermitianPath& x, HurstIndex H) {
  const Matrix diff = strato_integral(p, q, x, H) - ito_integral(p, q, x, H);
  const Matrix corr = strato_correction(p, q, x);
  const double num = (diff - corr).norm();
  if (num == 0.0) return 0.0;
  return num / std::max(diff.norm(), corr.norm());
}

Quadrature gauss_legendre(unsigned n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  Quadrature rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double deriv = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double pn = std::legendre(n, x);
      const double pm = std::legendre(n - 1, x);
      deriv = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double pn = std::legendre(n, x);
    const double pm = std::legendre(n - 1, x);
    deriv = n * (x * pn - pm) / (x * x - 1.0);
    rule.nodes[i] = 0.5 * (x + 1.0);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * deriv * deriv);
  }
  return rule;
}

Matrix wong_zakai_integral(const Polynomial& p, const Polynomial& q, const HermitianPath& x,
                           unsigned level) {
  if (level > x.grid().level()) throw DomainError("interpolation level exceeds the path level");
  const unsigned nodes = (p.degree() + q.degree() + 2) / 2 + 1;
  const Quadrature rule = gauss_legendre(nodes);
  const DyadicGrid grid(level);
  const auto d = idx(x.dim());
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < grid.intervals(); ++k) {
    const Matrix x0 = x.at_index(x.grid().refine_index(k, level));
    const Matrix dx = x.at_index(x.grid().refine_index(k + 1, level)) - x0;
    for (unsigned r = 0; r < nodes; ++r) {
      const Matrix y = x0 + rule.nodes[r] * dx;
      sum.noalias() += rule.weights[r] * (p(y) * dx * q(y));
    }
  }
  return sum;
}

}  // namespace hfbm

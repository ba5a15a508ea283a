#include "hfbm/levy_area.hpp"

#include <cmath>
#include <string>

#include "hfbm/error.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/rng.hpp"

namespace hfbm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Row-major vectorization of a d x d matrix.
Eigen::VectorXcd vec(const Matrix& m) {
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> r = m;
  return Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size());
}

template <class Table>
auto block_area(const Table& table, std::size_t p0, std::size_t p1, AreaMode mode) {
  const auto len = idx(p1 - p0);
  const auto start = table.row(idx(p0));
  auto from_start = (table.middleRows(idx(p0), len).rowwise() - start).eval();
  auto steps = (table.middleRows(idx(p0) + 1, len) - table.middleRows(idx(p0), len)).eval();
  auto out = (from_start.transpose() * steps).eval();
  if (mode == AreaMode::Trapezoid) out += 0.5 * (steps.transpose() * steps);
  return out;
}

}  // namespace

const char* to_string(AreaMode mode) noexcept {
  return mode == AreaMode::LeftPoint ? "left-point" : "trapezoid";
}

double scalar_area(const ScalarPath& a, const ScalarPath& b, const DyadicGrid& coarse, double s,
                   double t, AreaMode mode) {
  if (!(a.grid == b.grid)) throw DomainError("scalar_area: paths live on different grids");
  if (coarse.level() > a.grid.level()) throw DomainError("scalar_area: coarse grid finer than paths");
  if (s > t) throw DomainError("scalar_area: requires s <= t");
  const std::size_t p0 = a.grid.refine_index(coarse.index_of(s), coarse.level());
  const std::size_t p1 = a.grid.refine_index(coarse.index_of(t), coarse.level());
  KahanSum acc;
  for (std::size_t m = p0; m < p1; ++m) {
    const double db = b.values[m + 1] - b.values[m];
    double da = a.values[m] - a.values[p0];
    if (mode == AreaMode::Trapezoid) da = 0.5 * (da + a.values[m + 1] - a.values[p0]);
    acc.add(da * db);
  }
  return acc.value();
}

LevyArea2::LevyArea2(std::shared_ptr<const HermitianPath> path, unsigned coarse_level, AreaMode mode)
    : dim_(path->dim()), coarse_(coarse_level), mode_(mode), path_(std::move(path)) {
  if (coarse_level > path_->grid().level()) {
    throw DomainError("coarse level " + std::to_string(coarse_level) + " exceeds the fine level " +
                      std::to_string(path_->grid().level()));
  }
  values_.reserve(coarse_.size());
  for (std::size_t k = 0; k < coarse_.size(); ++k) {
    values_.push_back(path_->at_index(path_->grid().refine_index(k, coarse_level)));
  }
}

LevyArea2 LevyArea2::lift(const ScalarPathBundle& bundle, unsigned coarse_level, AreaMode mode) {
  LevyArea2 out(std::make_shared<const HermitianPath>(assemble_hfbm(bundle)), coarse_level, mode);
  const std::size_t d = bundle.dim();
  const std::size_t n_real = d * (d + 1) / 2;
  const std::size_t points = bundle.grid().size();

  Eigen::MatrixXd table(idx(points), idx(d * d));
  for (std::size_t a = 0; a < n_real; ++a)
    table.col(idx(a)) = Eigen::Map<const Eigen::VectorXd>(bundle.real_paths()[a].values.data(), idx(points));
  for (std::size_t a = 0; a < d * (d - 1) / 2; ++a)
    table.col(idx(n_real + a)) =
        Eigen::Map<const Eigen::VectorXd>(bundle.imag_paths()[a].values.data(), idx(points));

  // Coefficients of the entries X(i,j) in terms of the scalar paths.
  Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(idx(d * d), idx(d * d));
  const double diag = 1.0 / std::sqrt(static_cast<double>(d));
  const double off = 1.0 / std::sqrt(2.0 * static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    combo(idx(i * d + i), idx(i * (i + 1) / 2 + i)) = diag;
    for (std::size_t j = 0; j < i; ++j) {
      const auto re = idx(i * (i + 1) / 2 + j);
      const auto im = idx(n_real + i * (i - 1) / 2 + j);
      combo(idx(i * d + j), re) = off;
      combo(idx(i * d + j), im) = Complex(0.0, off);
      combo(idx(j * d + i), re) = off;
      combo(idx(j * d + i), im) = Complex(0.0, -off);
    }
  }

  const std::size_t step = std::size_t{1} << (bundle.grid().level() - coarse_level);
  out.blocks_.reserve(out.coarse_.intervals());
  for (std::size_t m = 0; m < out.coarse_.intervals(); ++m) {
    const Eigen::MatrixXd real_area = block_area(table, m * step, (m + 1) * step, mode);
    out.blocks_.emplace_back(d, combo * real_area.cast<Complex>() * combo.transpose());
  }
  return out;
}

LevyArea2 LevyArea2::lift(const HermitianPath& fine, unsigned coarse_level, AreaMode mode) {
  LevyArea2 out(std::make_shared<const HermitianPath>(fine), coarse_level, mode);
  const Eigen::MatrixXcd table = fine.entry_table();
  const std::size_t step = std::size_t{1} << (fine.grid().level() - coarse_level);
  out.blocks_.reserve(out.coarse_.intervals());
  for (std::size_t m = 0; m < out.coarse_.intervals(); ++m) {
    out.blocks_.emplace_back(fine.dim(), block_area(table, m * step, (m + 1) * step, mode));
  }
  return out;
}

void LevyArea2::check_indices(std::size_t a, std::size_t b) const {
  if (a > b || b >= coarse_.size()) {
    throw DomainError("area requires coarse indices a <= b <= " + std::to_string(coarse_.intervals()));
  }
}

Tensor2 LevyArea2::area(std::size_t a, std::size_t b) const {
  check_indices(a, b);
  Tensor2 out(dim_);
  if (a == b) return out;
  const Eigen::VectorXcd start = vec(values_[a]);
  for (std::size_t m = a; m < b; ++m) {
    out.coeffs() += blocks_[m].coeffs();
    if (m > a) {
      out.coeffs().noalias() += (vec(values_[m]) - start) * (vec(values_[m + 1]) - vec(values_[m])).transpose();
    }
  }
  return out;
}

Tensor2 LevyArea2::direct_area(std::size_t a, std::size_t b) const {
  check_indices(a, b);
  if (a == b) return Tensor2(dim_);
  const unsigned level = coarse_.level();
  const std::size_t p0 = fine().refine_index(a, level);
  const std::size_t p1 = fine().refine_index(b, level);
  const std::size_t d = dim_;
  Eigen::MatrixXcd table(idx(p1 - p0 + 1), idx(d * d));
  for (std::size_t k = p0; k <= p1; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) table(idx(k - p0), idx(i * d + j)) = path_->entry(k, i, j);
  return Tensor2(d, block_area(table, 0, p1 - p0, mode_));
}

Matrix contract_right(const Tensor2& x2, const Matrix& b) {
  const std::size_t d = x2.dim();
  Matrix m = Matrix::Zero(idx(d), idx(d));
  for (std::size_t l1 = 0; l1 < d; ++l1)
    for (std::size_t l2 = 0; l2 < d; ++l2) {
      const Complex w = b(idx(l1), idx(l2));
      if (w == Complex{}) continue;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j) m(idx(k), idx(j)) += w * x2(k, l1, l2, j);
    }
  return m;
}

Matrix apply_area(const Tensor2& x2, const Tensor2& t) {
  const std::size_t d = x2.dim();
  if (t.dim() != d) throw DomainError("apply_area: dimension mismatch");
  Matrix out = Matrix::Zero(idx(d), idx(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l1 = 0; l1 < d; ++l1)
        for (std::size_t l2 = 0; l2 < d; ++l2) {
          const Complex w = t(i, k, l1, l2);
          if (w == Complex{}) continue;
          for (std::size_t j = 0; j < d; ++j) out(idx(i), idx(j)) += w * x2(k, l1, l2, j);
        }
  return out;
}

ProductLevyArea::ProductLevyArea(std::shared_ptr<const LevyArea2> area) : area_(std::move(area)) {
  if (!area_) throw DomainError("ProductLevyArea needs an area");
}

Matrix ProductLevyArea::apply(std::size_t a, std::size_t b, const Tensor2& t) const {
  return apply_area(area_->area(a, b), t);
}

Matrix ProductLevyArea::apply(std::size_t a, std::size_t b, const Tensor2List& t) const {
  if (t.dim() != dim()) throw DomainError("product area: dimension mismatch");
  const Tensor2 x2 = area_->area(a, b);
  Matrix out = Matrix::Zero(idx(dim()), idx(dim()));
  for (const auto& term : t.terms()) out.noalias() += term.weight * (term.left * contract_right(x2, term.right));
  return out;
}

Matrix ProductLevyArea::dual_apply(std::size_t a, std::size_t b, const Tensor2& t) const {
  return apply(a, b, dual(t)).adjoint();
}

Matrix ProductLevyArea::dual_apply(std::size_t a, std::size_t b, const Tensor2List& t) const {
  return apply(a, b, dual(t)).adjoint();
}

Matrix ProductLevyArea::chen_defect(std::size_t s, std::size_t u, std::size_t t,
                                    const Tensor2& tensor) const {
  if (!(s <= u && u <= t)) throw DomainError("chen_defect requires s <= u <= t");
  const LevyArea2& x = *area_;
  const Matrix dsu = x.increment(s, u);
  const Matrix dut = x.increment(u, t);
  return apply_area(x.direct_area(s, t), tensor) - apply_area(x.direct_area(s, u), tensor) -
         apply_area(x.direct_area(u, t), tensor) - sharp(tensor, dsu) * dut;
}

double ProductLevyArea::operator_norm(std::size_t a, std::size_t b) const {
  const Tensor2 x2 = area_->area(a, b);
  const std::size_t d = dim();
  Eigen::MatrixXcd m(idx(d * d * d), idx(d));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l1 = 0; l1 < d; ++l1)
      for (std::size_t l2 = 0; l2 < d; ++l2)
        for (std::size_t j = 0; j < d; ++j) m(idx((k * d + l1) * d + l2), idx(j)) = x2(k, l1, l2, j);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Tensor2 classical_chen_defect(const LevyArea2& area, std::size_t s, std::size_t u, std::size_t t) {
  if (!(s <= u && u <= t)) throw DomainError("chen_defect requires s <= u <= t");
  Tensor2 out = area.direct_area(s, t) - area.direct_area(s, u) - area.direct_area(u, t);
  out -= Tensor2::simple(area.increment(s, u), area.increment(u, t));
  return out;
}

MatrixEstimate strato_minus_ito_area(HurstIndex H, std::size_t d, unsigned fine_level, double s,
                                     double t, const Matrix& u, const Matrix& v,
                                     std::size_t samples, std::uint64_t seed, unsigned threads) {
  H.require_brownian();
  if (samples < 2) throw DomainError("strato_minus_ito_area needs at least two samples");
  const double times[] = {s, t};
  const unsigned coarse_level = dyadic_level_of(times);
  if (coarse_level > fine_level) throw DomainError("s and t must lie on the fine grid");
  const DyadicGrid coarse(coarse_level);
  const std::size_t a = coarse.index_of(s);
  const std::size_t b = coarse.index_of(t);
  if (a > b) throw DomainError("strato_minus_ito_area requires s <= t");

  const FbmSampler sampler(H, DyadicGrid(fine_level));
  Tensor2List uv(d);
  uv.add(1.0, u, v);
  std::vector<Matrix> diffs(samples);
  parallel_for(samples, resolve_threads(threads), [&](std::size_t k) {
    const auto bundle = ScalarPathBundle::sample(sampler, d, sample_seed(seed, k));
    const auto strato = std::make_shared<const LevyArea2>(LevyArea2::lift(bundle, coarse_level, AreaMode::Trapezoid));
    const auto ito = std::make_shared<const LevyArea2>(LevyArea2::lift(bundle, coarse_level, AreaMode::LeftPoint));
    diffs[k] = ProductLevyArea(strato).apply(a, b, uv) - ProductLevyArea(ito).apply(a, b, uv);
  });

  MatrixEstimate est;
  est.samples = samples;
  const auto D = idx(d);
  est.mean = Matrix::Zero(D, D);
  est.se_real = Eigen::MatrixXd::Zero(D, D);
  est.se_imag = Eigen::MatrixXd::Zero(D, D);
  for (Index i = 0; i < D; ++i)
    for (Index j = 0; j < D; ++j) {
      KahanSum re, im;
      for (const auto& m : diffs) {
        re.add(m(i, j).real());
        im.add(m(i, j).imag());
      }
      const double n = static_cast<double>(samples);
      const Complex mean(re.value() / n, im.value() / n);
      KahanSum vr, vi;
      for (const auto& m : diffs) {
        vr.add(std::norm(m(i, j).real() - mean.real()));
        vi.add(std::norm(m(i, j).imag() - mean.imag()));
      }
      est.mean(i, j) = mean;
      est.se_real(i, j) = std::sqrt(vr.value() / (n - 1.0) / n);
      est.se_imag(i, j) = std::sqrt(vi.value() / (n - 1.0) / n);
    }
  return est;
}

}  // namespace hfbm

#include "hfbm/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

#include "hfbm/error.hpp"
#include "hfbm/rng.hpp"

namespace hfbm {

HurstIndex::HurstIndex(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError("Hurst index must lie in (0, 1), got " + std::to_string(value));
  }
}

void HurstIndex::require_rough() const {
  if (!(value_ > 1.0 / 3.0)) {
    throw DomainError("rough integration requires H > 1/3, got " + std::to_string(value_));
  }
}

void HurstIndex::require_brownian() const {
  if (!is_brownian()) {
    throw DomainError("operation is only defined for H = 1/2, got " + std::to_string(value_));
  }
}

DyadicGrid::DyadicGrid(unsigned level) : level_(level) {
  if (level > kMaxLevel) {
    throw DomainError("dyadic level " + std::to_string(level) + " exceeds the supported maximum");
  }
}

bool DyadicGrid::contains(double t) const noexcept {
  if (!(t >= 0.0 && t <= 1.0)) return false;
  const double scaled = t * static_cast<double>(intervals());
  return scaled == std::floor(scaled);
}

std::size_t DyadicGrid::index_of(double t) const {
  if (!contains(t)) {
    throw DomainError("time " + std::to_string(t) + " is not a point of the level-" +
                      std::to_string(level_) + " dyadic grid");
  }
  return static_cast<std::size_t>(t * static_cast<double>(intervals()));
}

std::size_t DyadicGrid::refine_index(std::size_t coarse_index, unsigned coarse_level) const {
  if (coarse_level > level_) {
    throw DomainError("cannot refine from level " + std::to_string(coarse_level) + " to level " +
                      std::to_string(level_));
  }
  return coarse_index << (level_ - coarse_level);
}

unsigned dyadic_level_of(std::span<const double> times, unsigned max_level) {
  for (unsigned level = 0; level <= max_level; ++level) {
    const DyadicGrid grid(level);
    if (std::all_of(times.begin(), times.end(), [&](double t) { return grid.contains(t); })) {
      return level;
    }
  }
  throw DomainError("times are not dyadic rationals in [0, 1] up to level " +
                    std::to_string(max_level));
}

ScalarPath ScalarPath::restrict_to(unsigned level) const {
  const DyadicGrid coarse(level);
  ScalarPath out{coarse, std::vector<double>(coarse.size())};
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    out.values[i] = values[grid.refine_index(i, level)];
  }
  return out;
}

double fbm_covariance(HurstIndex H, double s, double t) {
  if (s < 0.0 || t < 0.0) throw DomainError("fbm_covariance requires s, t >= 0");
  const double two_h = 2.0 * H.value();
  return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

double increment_covariance(HurstIndex H, double u1, double u2, double v1, double v2) {
  return fbm_covariance(H, u2, v2) - fbm_covariance(H, u2, v1) - fbm_covariance(H, u1, v2) +
         fbm_covariance(H, u1, v1);
}

Eigen::MatrixXd gram_matrix(HurstIndex H, const DyadicGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.intervals());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = fbm_covariance(H, grid.point(i + 1), grid.point(j + 1));
    }
  }
  return g;
}

namespace {

// Autocovariance of unit-spacing fractional Gaussian noise.
double fgn_autocovariance(double hurst, std::size_t k) {
  const double two_h = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) +
                std::pow(std::abs(kk - 1.0), two_h));
}

}  // namespace

FbmSampler::FbmSampler(HurstIndex H, DyadicGrid grid) : hurst_(H), grid_(grid) {
  if (H.is_brownian()) {
    method_ = Method::Brownian;
    return;
  }
  if (grid.level() <= kCholeskyMaxLevel) {
    method_ = Method::Cholesky;
    Eigen::MatrixXd gram = gram_matrix(H, grid);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      const double ridge = 1e-12 * gram.diagonal().maxCoeff();
      gram.diagonal().array() += ridge;
      llt.compute(gram);
      if (llt.info() != Eigen::Success) {
        throw NumericError("Cholesky factorization of the fBm Gram matrix failed after ridge " +
                           std::to_string(ridge));
      }
    }
    factor_ = llt.matrixL();
    return;
  }

  method_ = Method::Circulant;
  const std::size_t n = grid.intervals();
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    row[j] = fgn_autocovariance(H.value(), lag);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);
  double max_eig = 0.0;
  for (const auto& e : eig) max_eig = std::max(max_eig, e.real());
  embedding_scale_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = eig[k].real();
    if (lambda < 0.0) {
      if (lambda < -1e-10 * max_eig) {
        throw NumericError("circulant embedding is not nonnegative definite (eigenvalue " +
                           std::to_string(lambda) + ")");
      }
      lambda = 0.0;
    }
    embedding_scale_[k] = std::sqrt(lambda / static_cast<double>(m));
  }
}

ScalarPath FbmSampler::brownian(std::uint64_t seed) const {
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal;
  const double scale = std::sqrt(grid_.mesh());
  ScalarPath path{grid_, std::vector<double>(grid_.size(), 0.0)};
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    path.values[i] = path.values[i - 1] + scale * normal(engine);
  }
  return path;
}

ScalarPath FbmSampler::circulant(std::uint64_t seed) const {
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal;
  const std::size_t m = embedding_scale_.size();
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(engine);
    const double im = normal(engine);
    w[k] = embedding_scale_[k] * std::complex<double>(re, im);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> y;
  fft.fwd(y, w);
  const double scale = std::pow(grid_.mesh(), hurst_.value());
  ScalarPath path{grid_, std::vector<double>(grid_.size(), 0.0)};
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    path.values[i] = path.values[i - 1] + scale * y[i - 1].real();
  }
  return path;
}

std::vector<ScalarPath> FbmSampler::sample_many(std::span<const std::uint64_t> seeds) const {
  std::vector<ScalarPath> out;
  out.reserve(seeds.size());
  if (method_ == Method::Brownian) {
    for (const auto s : seeds) out.push_back(brownian(s));
    return out;
  }
  if (method_ == Method::Circulant) {
    for (const auto s : seeds) out.push_back(circulant(s));
    return out;
  }
  const auto n = factor_.rows();
  const auto count = static_cast<Eigen::Index>(seeds.size());
  Eigen::MatrixXd z(n, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    Engine engine = make_engine(seeds[static_cast<std::size_t>(c)]);
    std::normal_distribution<double> normal;
    for (Eigen::Index r = 0; r < n; ++r) z(r, c) = normal(engine);
  }
  const Eigen::MatrixXd x = factor_.triangularView<Eigen::Lower>() * z;
  for (Eigen::Index c = 0; c < count; ++c) {
    ScalarPath path{grid_, std::vector<double>(grid_.size(), 0.0)};
    for (Eigen::Index r = 0; r < n; ++r) path.values[static_cast<std::size_t>(r) + 1] = x(r, c);
    out.push_back(std::move(path));
  }
  return out;
}

ScalarPath FbmSampler::sample(std::uint64_t seed) const {
  const std::uint64_t seeds[] = {seed};
  return std::move(sample_many(seeds).front());
}

ScalarPath sample_fbm(HurstIndex H, const DyadicGrid& grid, std::uint64_t seed) {
  return FbmSampler(H, grid).sample(seed);
}

}  // namespace hfbm

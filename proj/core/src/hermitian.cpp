#include "hfbm/hermitian.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "hfbm/error.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/rng.hpp"

namespace hfbm {

namespace {

constexpr char kMagic[4] = {'H', 'F', 'B', 'M'};
constexpr std::uint32_t kVersion = 1;

std::size_t lower_slot(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }
std::size_t strict_slot(std::size_t i, std::size_t j) { return i * (i - 1) / 2 + j; }

template <class U>
void put(std::ostream& os, U v) {
  char bytes[sizeof(U)];
  for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  os.write(bytes, sizeof(U));
}

template <class U>
U get(std::istream& is) {
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw ConfigError("truncated path file");
  }
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(U{bytes[b]} << (8 * b));
  return v;
}

}  // namespace

ScalarPathBundle::ScalarPathBundle(std::size_t d, std::vector<ScalarPath> real,
                                   std::vector<ScalarPath> imag)
    : dim_(d), grid_(real.empty() ? DyadicGrid(0) : real.front().grid),
      real_(std::move(real)), imag_(std::move(imag)) {
  if (d == 0) throw DomainError("bundle dimension must be positive");
  if (real_.size() != d * (d + 1) / 2 || imag_.size() != d * (d - 1) / 2) {
    throw DomainError("bundle needs d(d+1)/2 real and d(d-1)/2 imaginary paths");
  }
  for (const auto* family : {&real_, &imag_})
    for (const auto& p : *family) {
      if (!(p.grid == grid_) || p.values.size() != grid_.size()) {
        throw DomainError("bundle paths must share one dyadic grid");
      }
    }
}

ScalarPathBundle ScalarPathBundle::sample(const FbmSampler& sampler, std::size_t d,
                                          std::uint64_t seed, unsigned threads) {
  const std::size_t n_real = d * (d + 1) / 2;
  std::vector<std::uint64_t> seeds;
  seeds.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      seeds.push_back(path_seed(seed, static_cast<unsigned>(i), static_cast<unsigned>(j), 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j)
      seeds.push_back(path_seed(seed, static_cast<unsigned>(i), static_cast<unsigned>(j), 1));

  std::vector<ScalarPath> all(seeds.size(), ScalarPath{sampler.grid(), {}});
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  const std::size_t chunk = (seeds.size() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(seeds.size(), lo + chunk);
    if (lo >= hi) return;
    auto paths = sampler.sample_many(std::span(seeds).subspan(lo, hi - lo));
    for (std::size_t k = lo; k < hi; ++k) all[k] = std::move(paths[k - lo]);
  });
  std::vector<ScalarPath> real(std::make_move_iterator(all.begin()),
                               std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_real)));
  std::vector<ScalarPath> imag(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_real)),
                               std::make_move_iterator(all.end()));
  return ScalarPathBundle(d, std::move(real), std::move(imag));
}

const ScalarPath& ScalarPathBundle::real(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j > i) throw DomainError("real path index must satisfy j <= i < d");
  return real_[lower_slot(i, j)];
}

const ScalarPath& ScalarPathBundle::imag(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= i) throw DomainError("imaginary path index must satisfy j < i < d");
  return imag_[strict_slot(i, j)];
}

ScalarPathBundle ScalarPathBundle::scaled(double lambda) const {
  auto scale = [lambda](std::vector<ScalarPath> paths) {
    for (auto& p : paths)
      for (auto& v : p.values) v *= lambda;
    return paths;
  };
  return ScalarPathBundle(dim_, scale(real_), scale(imag_));
}

ScalarPathBundle ScalarPathBundle::restrict_to(unsigned level) const {
  auto restrict = [level](const std::vector<ScalarPath>& paths) {
    std::vector<ScalarPath> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(p.restrict_to(level));
    return out;
  };
  return ScalarPathBundle(dim_, restrict(real_), restrict(imag_));
}

HermitianPath::HermitianPath(std::size_t d, DyadicGrid grid)
    : dim_(d), grid_(grid), packed_(grid.size() * d * (d + 1) / 2) {
  if (d == 0) throw DomainError("matrix dimension must be positive");
}

HermitianPath HermitianPath::from_matrices(const DyadicGrid& grid, const std::vector<Matrix>& values) {
  if (values.size() != grid.size() || values.empty()) {
    throw DomainError("one matrix per grid point is required");
  }
  const auto d = static_cast<std::size_t>(values.front().rows());
  HermitianPath path(d, grid);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].rows() != static_cast<Eigen::Index>(d) || values[k].cols() != static_cast<Eigen::Index>(d)) {
      throw DomainError("matrices must all be d x d");
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        Complex v = values[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (i == j) v = v.real();
        path.set_upper(k, i, j, v);
      }
  }
  return path;
}

std::size_t HermitianPath::slot(std::size_t i, std::size_t j) const noexcept {
  // Row-major upper triangle: row i holds columns i..d-1.
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

Complex HermitianPath::entry(std::size_t k, std::size_t i, std::size_t j) const {
  const std::size_t per = dim_ * (dim_ + 1) / 2;
  if (i <= j) return packed_[k * per + slot(i, j)];
  return std::conj(packed_[k * per + slot(j, i)]);
}

void HermitianPath::set_upper(std::size_t k, std::size_t i, std::size_t j, Complex v) {
  if (i > j || j >= dim_ || k >= size()) throw DomainError("set_upper index out of range");
  if (i == j && v.imag() != 0.0) throw DomainError("diagonal entries of a Hermitian matrix are real");
  packed_[k * dim_ * (dim_ + 1) / 2 + slot(i, j)] = v;
}

Matrix HermitianPath::at_index(std::size_t k) const {
  if (k >= size()) throw DomainError("grid index out of range");
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix m(d, d);
  const Complex* p = packed_.data() + k * dim_ * (dim_ + 1) / 2;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      m(i, j) = *p;
      m(j, i) = std::conj(*p);
      ++p;
    }
  return m;
}

Matrix HermitianPath::increment(std::size_t a, std::size_t b) const {
  return at_index(b) - at_index(a);
}

HermitianPath HermitianPath::restrict_to(unsigned level) const {
  const DyadicGrid coarse(level);
  HermitianPath out(dim_, coarse);
  const std::size_t per = dim_ * (dim_ + 1) / 2;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const std::size_t src = grid_.refine_index(k, level);
    std::copy_n(packed_.begin() + static_cast<std::ptrdiff_t>(src * per), per,
                out.packed_.begin() + static_cast<std::ptrdiff_t>(k * per));
  }
  return out;
}

Eigen::MatrixXcd HermitianPath::entry_table() const {
  const auto n = static_cast<Eigen::Index>(size());
  const std::size_t d = dim_;
  Eigen::MatrixXcd table(n, static_cast<Eigen::Index>(d * d));
  for (Eigen::Index k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        table(k, static_cast<Eigen::Index>(i * d + j)) = entry(static_cast<std::size_t>(k), i, j);
  return table;
}

HermitianPath assemble_hfbm(const ScalarPathBundle& bundle) {
  const std::size_t d = bundle.dim();
  HermitianPath path(d, bundle.grid());
  const double diag_scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double off_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(d));
  for (std::size_t k = 0; k < bundle.grid().size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      path.set_upper(k, i, i, diag_scale * bundle.real(i, i).values[k]);
      for (std::size_t j = 0; j < i; ++j) {
        const Complex lower(bundle.real(i, j).values[k], bundle.imag(i, j).values[k]);
        path.set_upper(k, j, i, off_scale * std::conj(lower));
      }
    }
  return path;
}

double hfbm_covariance(HurstIndex H, double s, double t, std::size_t i, std::size_t j,
                       std::size_t k, std::size_t l, std::size_t d) {
  if (i >= d || j >= d || k >= d || l >= d) throw DomainError("matrix index out of range");
  if (i != l || j != k) return 0.0;
  return fbm_covariance(H, s, t) / static_cast<double>(d);
}

void write_path(std::ostream& os, const HermitianPath& path, const PathHeader& header) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(path.dim()));
  put<std::uint32_t>(os, path.grid().level());
  put<std::uint64_t>(os, std::bit_cast<std::uint64_t>(header.hurst));
  put<std::uint64_t>(os, header.seed);
  const std::size_t d = path.dim();
  for (std::size_t k = 0; k < path.size(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Complex v = path.entry(k, i, j);
        put<std::uint32_t>(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
        put<std::uint32_t>(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
      }
  if (!os) throw ConfigError("failed to write path data");
}

void write_path(const std::string& file, const HermitianPath& path, const PathHeader& header) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + file + " for writing");
  write_path(os, path, header);
}

HermitianPath read_path(std::istream& is, PathHeader* header) {
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw ConfigError("not an HFBM path file");
  }
  if (get<std::uint32_t>(is) != kVersion) throw ConfigError("unsupported path file version");
  PathHeader h;
  h.dim = get<std::uint32_t>(is);
  h.level = get<std::uint32_t>(is);
  h.hurst = std::bit_cast<double>(get<std::uint64_t>(is));
  h.seed = get<std::uint64_t>(is);
  if (h.dim == 0 || h.level > DyadicGrid::kMaxLevel) throw ConfigError("corrupt path file header");
  HermitianPath path(h.dim, DyadicGrid(h.level));
  for (std::size_t k = 0; k < path.size(); ++k)
    for (std::size_t i = 0; i < h.dim; ++i)
      for (std::size_t j = 0; j < h.dim; ++j) {
        const float re = std::bit_cast<float>(get<std::uint32_t>(is));
        const float im = std::bit_cast<float>(get<std::uint32_t>(is));
        if (i < j) path.set_upper(k, i, j, Complex(re, im));
        if (i == j) path.set_upper(k, i, i, Complex(re, 0.0));
      }
  if (header) *header = h;
  return path;
}

HermitianPath read_path(const std::string& file, PathHeader* header) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + file);
  return read_path(is, header);
}

}  // namespace hfbm

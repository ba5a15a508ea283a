#include "hfbm/moments.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hfbm/error.hpp"
#include "hfbm/pairings.hpp"
#include "hfbm/parallel.hpp"

namespace hfbm {

namespace {

// All pairings of one size, flattened as (p, q) pairs, with their genus.
struct PairingTable {
  unsigned r = 0;
  std::size_t count = 0;
  std::vector<std::uint8_t> pairs;
  std::vector<std::uint8_t> genus;
  unsigned max_genus = 0;
};

const PairingTable& pairing_table(unsigned r) {
  static std::mutex mutex;
  static std::map<unsigned, std::unique_ptr<PairingTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[r];
  if (!slot) {
    auto table = std::make_unique<PairingTable>();
    table->r = r;
    table->max_genus = r / 4;
    for_each_pairing(r, [&](const Pairing& pi) {
      for (unsigned p = 0; p < r; ++p)
        if (pi.partner(p) > p) {
          table->pairs.push_back(static_cast<std::uint8_t>(p));
          table->pairs.push_back(static_cast<std::uint8_t>(pi.partner(p)));
        }
      table->genus.push_back(static_cast<std::uint8_t>(hfbm::genus(pi)));
      ++table->count;
    });
    slot = std::move(table);
  }
  return *slot;
}

void check_letter(const Letter& a) {
  if (a.t < 0.0 || a.s < 0.0) throw DomainError("letter times must be nonnegative");
  if (a.kind == Letter::Kind::Increment && a.s > a.t) throw DomainError("increment letter needs s <= t");
}

// Adds prod cov over each pairing into the per-genus accumulators.
void accumulate(const PairingTable& table, const Eigen::MatrixXd& cov, double weight,
                std::vector<KahanSum>& acc) {
  const unsigned half = table.r / 2;
  const std::uint8_t* pair = table.pairs.data();
  for (std::size_t k = 0; k < table.count; ++k, pair += 2 * half) {
    double prod = weight;
    for (unsigned e = 0; e < half && prod != 0.0; ++e) prod *= cov(pair[2 * e], pair[2 * e + 1]);
    if (prod != 0.0) acc[table.genus[k]].add(prod);
  }
}

std::vector<double> values(const std::vector<KahanSum>& acc) {
  std::vector<double> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(a.value());
  return out;
}

}  // namespace

double letter_covariance(HurstIndex H, const Letter& a, const Letter& b) {
  check_letter(a);
  check_letter(b);
  auto c = [&](double u, double v) { return fbm_covariance(H, u, v); };
  const bool ai = a.kind == Letter::Kind::Increment;
  const bool bi = b.kind == Letter::Kind::Increment;
  if (!ai && !bi) return c(a.t, b.t);
  if (ai && !bi) return c(a.t, b.t) - c(a.s, b.t);
  if (!ai && bi) return c(a.t, b.t) - c(a.t, b.s);
  return increment_covariance(H, a.s, a.t, b.s, b.t);
}

Eigen::MatrixXd covariance_matrix(const MomentQuery& q) {
  const auto r = static_cast<Eigen::Index>(q.letters.size());
  Eigen::MatrixXd cov(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov(i, j) = cov(j, i) = letter_covariance(q.H, q.letters[static_cast<std::size_t>(i)],
                                                q.letters[static_cast<std::size_t>(j)]);
    }
  return cov;
}

std::vector<double> genus_sums(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw DomainError("covariance matrix must be square");
  const auto r = static_cast<unsigned>(cov.rows());
  if (r % 2 != 0) return {0.0};
  const PairingTable& table = pairing_table(r);
  std::vector<KahanSum> acc(table.max_genus + 1);
  accumulate(table, cov, 1.0, acc);
  return values(acc);
}

std::vector<double> genus_sums(const MomentQuery& q) { return genus_sums(covariance_matrix(q)); }

std::vector<double> genus_sums(const std::vector<WordTerm>& terms, HurstIndex H) {
  std::vector<double> total;
  for (const auto& term : terms) {
    const auto sums = genus_sums(MomentQuery{term.letters, H});
    if (sums.size() > total.size()) total.resize(sums.size(), 0.0);
    for (std::size_t g = 0; g < sums.size(); ++g) total[g] += term.coeff * sums[g];
  }
  if (total.empty()) total.push_back(0.0);
  return total;
}

double combine_genus_sums(const std::vector<double>& sums, std::optional<unsigned> d) {
  if (!d) return sums.empty() ? 0.0 : sums.front();
  if (*d == 0) throw DomainError("matrix dimension must be positive");
  const double inv = 1.0 / (static_cast<double>(*d) * static_cast<double>(*d));
  double scale = 1.0;
  KahanSum acc;
  for (double g : sums) {
    acc.add(scale * g);
    scale *= inv;
  }
  return acc.value();
}

double genus_expansion_moment(const MomentQuery& q, unsigned d) {
  return combine_genus_sums(genus_sums(q), d);
}

double nc_moment(const MomentQuery& q) { return genus_sums(q).front(); }

double genus_g_functional(const MomentQuery& q, unsigned g) {
  const auto sums = genus_sums(q);
  return g < sums.size() ? sums[g] : 0.0;
}

double genus_g_functional(const std::vector<WordTerm>& terms, HurstIndex H, unsigned g) {
  const auto sums = genus_sums(terms, H);
  return g < sums.size() ? sums[g] : 0.0;
}

std::vector<WordTerm> commutator_square(double s, double t) {
  const Letter a = Letter::point(s);
  const Letter b = Letter::point(t);
  return {{1.0, {a, b, b, a}}, {-1.0, {a, b, a, b}}, {-1.0, {b, a, b, a}}, {1.0, {b, a, a, b}}};
}

std::vector<double> riemann_integrand_genus_sums(const Polynomial& p, const Polynomial& q,
                                                 unsigned r, unsigned n, HurstIndex H,
                                                 unsigned threads) {
  if (!p.has_real_coefficients() || !q.has_real_coefficients()) {
    throw DomainError("riemann_integrand_moment needs real polynomial coefficients");
  }
  if (r == 0) throw DomainError("moment order must be positive");
  if (r * (p.degree() + q.degree() + 1) > 12) {
    throw DomainError("riemann_integrand_moment guard: r (deg P + deg Q + 1) must be <= 12");
  }
  if (n > 6) throw DomainError("riemann_integrand_moment guard: grid level must be <= 6");
  const std::vector<double> empty(r * (p.degree() + q.degree() + 1) / 4 + 1, 0.0);
  if (p.is_zero() || q.is_zero()) return empty;

  // Monomial choices (a, b) with nonzero coefficients.
  struct Mono {
    unsigned a, b;
    double coeff;
  };
  std::vector<Mono> monos;
  for (unsigned a = 0; a <= p.degree(); ++a)
    for (unsigned b = 0; b <= q.degree(); ++b) {
      const double c = p.coeffs()[a].real() * q.coeffs()[b].real();
      if (c != 0.0) monos.push_back({a, b, c});
    }

  const std::size_t steps = std::size_t{1} << n;
  std::size_t mono_combos = 1;
  std::size_t time_combos = 1;
  for (unsigned f = 0; f < r; ++f) {
    mono_combos *= monos.size();
    time_combos *= steps;
  }
  const double work = static_cast<double>(mono_combos) * static_cast<double>(time_combos) *
                      static_cast<double>(pairing_count(r * (p.degree() + q.degree() + 1) / 2 * 2));
  if (work > 4e9) throw DomainError("riemann_integrand_moment guard: expansion too large");

  // Covariances between grid points t_0..t_{2^n}.
  const DyadicGrid grid(n);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fbm_covariance(H, grid.point(i), grid.point(j));

  // Each letter is a combination of at most two grid points.
  struct GridLetter {
    std::size_t hi, lo;
    bool increment;
  };
  auto letter_cov = [&](const GridLetter& x, const GridLetter& y) {
    auto cc = [&](std::size_t i, std::size_t j) {
      return c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    double v = cc(x.hi, y.hi);
    if (x.increment) v -= cc(x.lo, y.hi);
    if (y.increment) v -= cc(x.hi, y.lo);
    if (x.increment && y.increment) v += cc(x.lo, y.lo);
    return v;
  };

  constexpr std::size_t kBlocks = 64;
  const std::size_t total = mono_combos * time_combos;
  const std::size_t per_block = (total + kBlocks - 1) / kBlocks;
  std::vector<std::vector<KahanSum>> partial(kBlocks, std::vector<KahanSum>(empty.size()));

  parallel_for(kBlocks, resolve_threads(threads), [&](std::size_t block) {
    const std::size_t lo = block * per_block;
    const std::size_t hi = std::min(total, lo + per_block);
    std::vector<GridLetter> word;
    std::vector<unsigned> mono_idx(r), time_idx(r);
    for (std::size_t flat = lo; flat < hi; ++flat) {
      std::size_t rest = flat;
      for (unsigned f = 0; f < r; ++f) {
        time_idx[f] = static_cast<unsigned>(rest % steps);
        rest /= steps;
      }
      for (unsigned f = 0; f < r; ++f) {
        mono_idx[f] = static_cast<unsigned>(rest % monos.size());
        rest /= monos.size();
      }
      word.clear();
      double weight = 1.0;
      bool vanishes = false;
      for (unsigned f = 0; f < r; ++f) {
        const Mono& m = monos[mono_idx[f]];
        const std::size_t ti = time_idx[f];
        if (ti == 0 && m.a + m.b > 0) {
          vanishes = true;  // X_0 = 0
          break;
        }
        weight *= m.coeff;
        for (unsigned k = 0; k < m.a; ++k) word.push_back({ti, ti, false});
        word.push_back({ti + 1, ti, true});
        for (unsigned k = 0; k < m.b; ++k) word.push_back({ti, ti, false});
      }
      if (vanishes || word.size() % 2 != 0) continue;
      const auto len = static_cast<Eigen::Index>(word.size());
      Eigen::MatrixXd cov(len, len);
      for (Eigen::Index i = 0; i < len; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
          cov(i, j) = cov(j, i) = letter_cov(word[static_cast<std::size_t>(i)], word[static_cast<std::size_t>(j)]);
      accumulate(pairing_table(static_cast<unsigned>(word.size())), cov, weight, partial[block]);
    }
  });

  std::vector<KahanSum> acc(empty.size());
  for (const auto& part : partial)
    for (std::size_t g = 0; g < acc.size(); ++g) acc[g].add(part[g].value());
  return values(acc);
}

double riemann_integrand_moment(const Polynomial& p, const Polynomial& q, unsigned r, unsigned n,
                                HurstIndex H, std::optional<unsigned> d, unsigned threads) {
  return combine_genus_sums(riemann_integrand_genus_sums(p, q, r, n, H, threads), d);
}

}  // namespace hfbm

#include "hfbm/pairings.hpp"

#include <algorithm>
#include <string>

#include "hfbm/error.hpp"

namespace hfbm {

namespace {

void check_size(unsigned r) {
  if (r % 2 != 0) throw DomainError("pairings need an even number of points, got " + std::to_string(r));
  if (r > kMaxPairingSize) {
    throw DomainError("pairing size " + std::to_string(r) + " exceeds the guard " +
                      std::to_string(kMaxPairingSize));
  }
}

void extend(std::vector<unsigned>& partner, std::vector<bool>& used,
            const std::function<void(const Pairing&)>& fn) {
  const unsigned r = static_cast<unsigned>(partner.size());
  unsigned first = 0;
  while (first < r && used[first]) ++first;
  if (first == r) {
    fn(Pairing(partner));
    return;
  }
  used[first] = true;
  for (unsigned q = first + 1; q < r; ++q) {
    if (used[q]) continue;
    used[q] = true;
    partner[first] = q;
    partner[q] = first;
    extend(partner, used, fn);
    used[q] = false;
  }
  used[first] = false;
}

}  // namespace

Pairing::Pairing(std::vector<unsigned> partner) : partner_(std::move(partner)) {
  const std::size_t r = partner_.size();
  for (std::size_t p = 0; p < r; ++p) {
    const unsigned q = partner_[p];
    if (q >= r || q == p || partner_[q] != p) {
      throw DomainError("partner array is not a fixed-point-free involution");
    }
  }
}

std::uint64_t pairing_count(unsigned r) {
  if (r % 2 != 0) return 0;
  std::uint64_t n = 1;
  for (unsigned k = r; k > 1; k -= 2) n *= k - 1;
  return n;
}

void for_each_pairing(unsigned r, const std::function<void(const Pairing&)>& fn) {
  check_size(r);
  std::vector<unsigned> partner(r, 0);
  std::vector<bool> used(r, false);
  extend(partner, used, fn);
}

std::vector<Pairing> enumerate_pairings(unsigned r) {
  std::vector<Pairing> out;
  out.reserve(pairing_count(r));
  for_each_pairing(r, [&](const Pairing& p) { out.push_back(p); });
  return out;
}

unsigned cycle_count(const std::vector<unsigned>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (unsigned v : perm) {
    if (v >= perm.size() || seen[v]) throw DomainError("not a permutation");
    seen[v] = true;
  }
  std::fill(seen.begin(), seen.end(), false);
  unsigned cycles = 0;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (std::size_t p = start; !seen[p]; p = perm[p]) seen[p] = true;
  }
  return cycles;
}

unsigned genus(const Pairing& pi) {
  const auto r = static_cast<unsigned>(pi.size());
  if (r == 0) return 0;
  std::vector<unsigned> composed(r);
  for (unsigned p = 0; p < r; ++p) composed[p] = (pi.partner(p) + 1) % r;
  const unsigned cycles = cycle_count(composed);
  const int twice = static_cast<int>(r / 2 + 1) - static_cast<int>(cycles);
  if (twice < 0 || twice % 2 != 0) throw NumericError("inconsistent genus computation");
  return static_cast<unsigned>(twice / 2);
}

bool is_noncrossing(const Pairing& pi) {
  const std::size_t r = pi.size();
  for (std::size_t p = 0; p < r; ++p) {
    const std::size_t pp = pi.partner(p);
    if (pp < p) continue;
    for (std::size_t q = p + 1; q < pp; ++q) {
      if (pi.partner(q) > pp) return false;
    }
  }
  return true;
}

std::uint64_t indicator_sum_check(const std::vector<unsigned>& sigma, unsigned d) {
  const std::size_t r = sigma.size();
  if (r > 8 || d > 4 || d == 0) throw DomainError("indicator_sum_check is limited to r <= 8, 1 <= d <= 4");
  const unsigned cycles = cycle_count(sigma);
  std::vector<unsigned> tuple(r, 0);
  std::uint64_t sum = 0;
  while (true) {
    bool ok = true;
    for (std::size_t p = 0; p < r && ok; ++p) ok = tuple[p] == tuple[sigma[p]];
    if (ok) ++sum;
    std::size_t pos = 0;
    while (pos < r && ++tuple[pos] == d) tuple[pos++] = 0;
    if (pos == r) break;
  }
  std::uint64_t expected = 1;
  for (unsigned c = 0; c < cycles; ++c) expected *= d;
  if (sum != expected) {
    throw NumericError("indicator sum " + std::to_string(sum) + " differs from d^cycles = " +
                       std::to_string(expected));
  }
  return sum;
}

std::uint64_t catalan(unsigned k) {
  std::uint64_t c = 1;
  for (unsigned n = 0; n < k; ++n) c = c * 2 * (2 * n + 1) / (n + 2);
  return c;
}

}  // namespace hfbm

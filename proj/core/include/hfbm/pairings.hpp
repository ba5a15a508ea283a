#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hfbm {

/// Perfect matching of {0, ..., r-1}: partner[p] = q iff {p, q} is a pair.
class Pairing {
 public:
  explicit Pairing(std::vector<unsigned> partner);

  std::size_t size() const noexcept { return partner_.size(); }
  unsigned partner(std::size_t p) const { return partner_.at(p); }
  const std::vector<unsigned>& partners() const noexcept { return partner_; }

  friend bool operator==(const Pairing&, const Pairing&) = default;

 private:
  std::vector<unsigned> partner_;
};

inline constexpr unsigned kMaxPairingSize = 16;

/// (r - 1)!! for even r.
std::uint64_t pairing_count(unsigned r);

/// Calls fn once per pairing of {0, ..., r-1} in lexicographic order.
/// Throws DomainError for odd r or r > kMaxPairingSize.
void for_each_pairing(unsigned r, const std::function<void(const Pairing&)>& fn);
std::vector<Pairing> enumerate_pairings(unsigned r);

/// Number of cycles of a permutation given in one-line form.
unsigned cycle_count(const std::vector<unsigned>& perm);

/// (r/2 + 1 - #(gamma o pi)) / 2 with gamma the cycle p -> p + 1 mod r.
unsigned genus(const Pairing& pi);

/// True iff no p < q < pi(p) < pi(q).
bool is_noncrossing(const Pairing& pi);

/// Brute-force sum over i in [d]^r of prod_p [i_p == i_sigma(p)]. Throws
/// NumericError if it differs from d^cycles(sigma).
std::uint64_t indicator_sum_check(const std::vector<unsigned>& sigma, unsigned d);

/// k-th Catalan number.
std::uint64_t catalan(unsigned k);

}  // namespace hfbm

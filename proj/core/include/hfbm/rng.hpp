#pragma once

#include <cstdint>
#include <random>

namespace hfbm {

// splitmix64 finalizer; used both as a hash and as the output function of Engine.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Substream seed for the scalar path (i, j, kind) of a bundle.
constexpr std::uint64_t path_seed(std::uint64_t master, unsigned i, unsigned j,
                                  unsigned kind) noexcept {
  const std::uint64_t key = (std::uint64_t{i} << 40) | (std::uint64_t{j} << 16) |
                            std::uint64_t{kind};
  return master ^ mix64(key);
}

/// Substream seed for the k-th Monte-Carlo path of an experiment.
constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t k) noexcept {
  return master ^ k;
}

/// splitmix64 generator. Seeding is O(1), which matters because every scalar
/// path gets its own stream.
class Engine {
 public:
  using result_type = std::uint64_t;

  explicit Engine(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t out = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

inline Engine make_engine(std::uint64_t seed) { return Engine{mix64(seed)}; }

}  // namespace hfbm

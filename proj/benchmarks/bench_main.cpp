#include <benchmark/benchmark.h>

#include <memory>
#include <numeric>
#include <vector>

#include "hfbm/fbm.hpp"
#include "hfbm/hermitian.hpp"
#include "hfbm/levy_area.hpp"
#include "hfbm/moments.hpp"
#include "hfbm/pairings.hpp"
#include "hfbm/rough_integral.hpp"

using namespace hfbm;

static void BM_SampleCholesky(benchmark::State& state) {
  const FbmSampler sampler(HurstIndex(0.7), DyadicGrid(static_cast<unsigned>(state.range(0))));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(++seed));
}
BENCHMARK(BM_SampleCholesky)->Arg(6)->Arg(8)->Arg(10);

static void BM_SampleManyCholesky(benchmark::State& state) {
  const FbmSampler sampler(HurstIndex(0.7), DyadicGrid(10));
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::iota(seeds.begin(), seeds.end(), seeds.back() + 1);
    benchmark::DoNotOptimize(sampler.sample_many(seeds));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleManyCholesky)->Arg(16)->Arg(64);

static void BM_SampleCirculant(benchmark::State& state) {
  const FbmSampler sampler(HurstIndex(0.4), DyadicGrid(static_cast<unsigned>(state.range(0))));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(++seed));
}
BENCHMARK(BM_SampleCirculant)->Arg(12)->Arg(14)->Arg(16);

static void BM_EnumeratePairings(benchmark::State& state) {
  const auto r = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    unsigned total = 0;
    for_each_pairing(r, [&](const Pairing& pi) { total += genus(pi); });
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairing_count(r)));
}
BENCHMARK(BM_EnumeratePairings)->Arg(8)->Arg(10)->Arg(12);

static void BM_GenusExpansion(benchmark::State& state) {
  const MomentQuery q{std::vector<Letter>(static_cast<std::size_t>(state.range(0)), Letter::point(1.0)),
                      HurstIndex(0.5)};
  for (auto _ : state) benchmark::DoNotOptimize(genus_expansion_moment(q, 8));
}
BENCHMARK(BM_GenusExpansion)->Arg(8)->Arg(12);

static void BM_LiftArea(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto bundle = ScalarPathBundle::sample(FbmSampler(HurstIndex(0.4), DyadicGrid(12)), d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(LevyArea2::lift(bundle, 6, AreaMode::Trapezoid));
}
BENCHMARK(BM_LiftArea)->Arg(2)->Arg(4)->Arg(8);

static void BM_CorrectedSum(benchmark::State& state) {
  const auto level = static_cast<unsigned>(state.range(0));
  const auto bundle = ScalarPathBundle::sample(FbmSampler(HurstIndex(0.4), DyadicGrid(12)), 4, 2);
  const RoughDriver driver(bundle, level, AreaMode::Trapezoid);
  const auto w = polynomial_biprocess(Polynomial{0.0, 0.0, 1.0}, Polynomial{0.0, 1.0}, driver.area().path(), level);
  for (auto _ : state) benchmark::DoNotOptimize(corrected_riemann_sum(w, driver, level, 0.0, 1.0));
}
BENCHMARK(BM_CorrectedSum)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();

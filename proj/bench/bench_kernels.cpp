// Serial reference vs OpenMP kernels. Arg(0) is the band limit.
// The reference triple_restrict takes about two minutes per call at L = 8.
#include <benchmark/benchmark.h>

#include <map>

#include "rlab/discretization.hpp"
#include "rlab/fields.hpp"

using namespace rlab;

namespace {

const Discretization& disc(int L) {
  static std::map<int, Discretization> cache;
  auto it = cache.find(L);
  if (it == cache.end()) {
    const Resolution r{L + 4, 2 * L + 8, 2 * L + 4, 2 * L + 8, L};
    it = cache.emplace(L, Discretization::build(r)).first;
  }
  return it->second;
}

template <Backend B>
void BM_convolve_pair(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Discretization& d = disc(L);
  const SphereField f = random_band_limited(1, L, d, true);
  const SphereField g = random_band_limited(2, L, d, true);
  for (auto _ : state) {
    BallField b = convolve_pair(f, g, d.ball, d.n_circle(), L, B);
    benchmark::DoNotOptimize(b.values().data());
  }
  state.counters["points"] = static_cast<double>(d.ball->size());
}

template <Backend B>
void BM_triple_restrict(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Discretization& d = disc(L);
  const SphereField f = random_band_limited(3, L, d, true);
  const PairConvolution pair = d.pair(f, f);
  for (auto _ : state) {
    SphereField t = triple_restrict(f, pair, L, d.geodesic, B);
    benchmark::DoNotOptimize(t[0]);
  }
}

}  // namespace

BENCHMARK(BM_convolve_pair<Backend::reference>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_pair<Backend::parallel>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_triple_restrict<Backend::reference>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_triple_restrict<Backend::parallel>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "amo/cocycle.hpp"
#include "amo/continued_fraction.hpp"
#include "amo/spectrum.hpp"

namespace {

constexpr double kGolden = 0.61803398874989484820;

void BM_TransferProduct(benchmark::State& state) {
  amo::OperatorParams p{2.0, kGolden, 0.3, 1.1};
  long long n = state.range(0);
  for (auto _ : state) {
    auto m = amo::cocycle::transfer_product(p, 0.25, n);
    benchmark::DoNotOptimize(m.log_scale);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TransferProduct)->Arg(1000)->Arg(100000);

void BM_BandEdges(benchmark::State& state) {
  long long p = state.range(0), q = state.range(1);
  for (auto _ : state) {
    auto bl = amo::spectrum::band_edges(1.0, p, q);
    benchmark::DoNotOptimize(bl.bands.data());
  }
}
BENCHMARK(BM_BandEdges)->Args({5, 8})->Args({13, 21})->Args({34, 55});

void BM_ContinuedFraction(benchmark::State& state) {
  for (auto _ : state) {
    auto cf = amo::arith::expand_golden(static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(cf.convergents.data());
  }
}
BENCHMARK(BM_ContinuedFraction)->Arg(30)->Arg(60);

}  // namespace

BENCHMARK_MAIN();

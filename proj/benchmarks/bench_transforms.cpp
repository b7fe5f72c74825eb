#include <benchmark/benchmark.h>

#include "tpb/spectral_field.hpp"

static void BM_ToGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::SpectralField u = tpb::random_field(1, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::to_grid(u, 2 * (2 * n + 1), 2 * n + 1));
}
BENCHMARK(BM_ToGrid)->RangeMultiplier(2)->Range(8, 64);

static void BM_ToSpectral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::GridField g = tpb::to_grid(tpb::random_field(2, n, n, 1.0), 2 * (2 * n + 1), 2 * n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::to_spectral(g, n, n));
}
BENCHMARK(BM_ToSpectral)->RangeMultiplier(2)->Range(8, 64);

static void BM_DealiasedProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::SpectralField u = tpb::random_field(3, n, n, 1.0);
  const tpb::SpectralField v = tpb::random_field(4, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::dealiased_product(u, v));
}
BENCHMARK(BM_DealiasedProduct)->RangeMultiplier(2)->Range(8, 64);

// Reuses the grid of the fixed factor, as inside a Krylov iteration.
static void BM_MultiplicationOperatorApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::MultiplicationOperator m(tpb::random_field(5, n, n, 1.0));
  const tpb::SpectralField w = tpb::random_field(6, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(m.apply(w));
}
BENCHMARK(BM_MultiplicationOperatorApply)->RangeMultiplier(2)->Range(8, 64);

BENCHMARK_MAIN();

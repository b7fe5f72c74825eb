#include <benchmark/benchmark.h>

#include "tpb/norms.hpp"
#include "tpb/operators.hpp"

static void BM_ApplyT(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::BurgersOperator op(0.1);
  const tpb::SpectralField u = tpb::random_field(1, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply_T(u));
}
BENCHMARK(BM_ApplyT)->RangeMultiplier(2)->Range(8, 64);

static void BM_InvertL(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::BurgersOperator op(0.1);
  const tpb::SpectralField f = tpb::random_field(2, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(op.invert_L(f));
}
BENCHMARK(BM_InvertL)->RangeMultiplier(2)->Range(8, 64);

static void BM_NormReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::SpectralField u = tpb::random_field(3, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::norm_report(u));
}
BENCHMARK(BM_NormReport)->RangeMultiplier(2)->Range(8, 64);

static void BM_GnProbe(benchmark::State& state) {
  const std::uint64_t seeds[] = {11};
  tpb::ProbeOptions o;
  o.n_t = o.n_x = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tpb::gn_probe(seeds, 20, o));
}
BENCHMARK(BM_GnProbe)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

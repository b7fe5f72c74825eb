#include <benchmark/benchmark.h>

#include "tpb/colehopf.hpp"
#include "tpb/norms.hpp"
#include "tpb/solver.hpp"

namespace {

tpb::SpectralField forcing(int n, double amplitude) {
  tpb::SpectralField f(n, n);
  f.set_mode(0, 1, 1.0);
  f.set_mode(1, 1, tpb::Complex(0.6, -0.3));
  f.set_mode(0, 2, -0.4);
  f.set_mode(1, 2, tpb::Complex(0.0, 0.25));
  f.set_mode(2, 3, 0.15);
  return (amplitude / tpb::dual_norm(f)) * f;
}

}  // namespace

// range(1) selects the linear path: 0 dense, 1 Krylov.
static void BM_LinearizedSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  tpb::SolverConfig cfg;
  cfg.mu = 0.1;
  cfg.dense_threshold = state.range(1) == 0 ? 1 << 30 : 0;
  const tpb::SpectralField m = 0.5 * tpb::random_field(1, n, n, 1.5);
  const tpb::SpectralField r = tpb::random_field(2, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::solve_linearized(m, r, cfg));
}
BENCHMARK(BM_LinearizedSolve)
    ->Args({8, 0})
    ->Args({8, 1})
    ->Args({16, 0})
    ->Args({16, 1})
    ->Args({32, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_NewtonManufactured(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  tpb::SpectralField u(n, n);
  u.set_mode(1, 1, tpb::Complex(0.0, -0.15));
  u.set_mode(2, 2, 0.05);
  const tpb::SpectralField f = tpb::BurgersOperator(1.0).apply_T(u);
  const tpb::SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(tpb::newton_solve(f, tpb::SpectralField(n, n), cfg));
}
BENCHMARK(BM_NewtonManufactured)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Homotopy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  tpb::SolverConfig cfg;
  cfg.mu = 0.1;
  const tpb::SpectralField f = forcing(n, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::homotopy_solve(f, cfg));
}
BENCHMARK(BM_Homotopy)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_Monodromy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tpb::SpectralField v = 0.5 * tpb::random_field(3, n, n, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpb::monodromy_leading_pair(v, 0.1));
}
BENCHMARK(BM_Monodromy)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

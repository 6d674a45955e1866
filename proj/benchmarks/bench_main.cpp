#include <benchmark/benchmark.h>

#include "hfopt/solvers.hpp"

using namespace hfopt;

namespace {

ElectronicSystem bench_system(int n) {
  return random_system(7, n, 4, Convention::RestrictedClosedShell, 0.5);
}

void BM_FockBuild(benchmark::State& state) {
  const ElectronicSystem sys = bench_system(static_cast<int>(state.range(0)));
  const DensityMatrix d = default_guess(sys);
  for (auto _ : state) benchmark::DoNotOptimize(fock(sys, d.matrix()));
}
BENCHMARK(BM_FockBuild)->Arg(6)->Arg(10)->Arg(16);

void BM_GeodesicStep(benchmark::State& state) {
  const ElectronicSystem sys = bench_system(static_cast<int>(state.range(0)));
  const DensityMatrix d = random_guess(sys, 3);
  const SymMatrix g = gradient_operator(sys, d.matrix());
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_step(d, g, 0.05));
}
BENCHMARK(BM_GeodesicStep)->Arg(6)->Arg(10)->Arg(16);

void BM_RoothaanIteration(benchmark::State& state) {
  const ElectronicSystem sys = bench_system(static_cast<int>(state.range(0)));
  const DensityMatrix d = default_guess(sys);
  for (auto _ : state) {
    const SymMatrix f = fock(sys, d.matrix());
    benchmark::DoNotOptimize(aufbau(f, d.n_occ()));
  }
}
BENCHMARK(BM_RoothaanIteration)->Arg(6)->Arg(10)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

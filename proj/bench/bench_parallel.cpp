// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "relspec/harness.hpp"
#include "relspec/selfnorm.hpp"

using namespace relspec;

static void BM_PivotSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_pivot_serial(20, state.range(0), 7));
  }
}
BENCHMARK(BM_PivotSerial)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_PivotParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_pivot(20, state.range(0), 7));
  }
}
BENCHMARK(BM_PivotParallel)->Arg(100000)->Unit(benchmark::kMillisecond);

namespace {

ExperimentConfig bench_config(int replicates) {
  ExperimentConfig c;
  c.magnitudes = {0.1};
  c.sample_sizes = {400};
  c.replicates = replicates;
  return c;
}

const PivotDistribution& bench_pivot() {
  static const PivotDistribution pivot = simulate_pivot(20, 100000, 1);
  return pivot;
}

}  // namespace

static void BM_CellSerial(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_cell_serial(config, 400, 0.1, bench_pivot()));
  }
}
BENCHMARK(BM_CellSerial)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_CellParallel(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_cell(config, 400, 0.1, bench_pivot()));
  }
}
BENCHMARK(BM_CellParallel)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// Serial reference vs OpenMP fan-out for the two data-parallel kernels:
// the angle-grid scan inside the discord optimizers and per-point sweeps.

#include <benchmark/benchmark.h>

#include "qcorr/cli.hpp"
#include "qcorr/optimize.hpp"

using namespace qcorr;

namespace {

parallel::Execution mode(const benchmark::State& state) {
  return state.range(0) ? parallel::Execution::kParallel : parallel::Execution::kSerial;
}

void BM_ScanGrid(benchmark::State& state) {
  const auto rho = random_mixed({2, 2}, 3, 1);
  const Objective f = [&](const std::vector<double>& x) {
    return classical_information(rho, qubit_basis(x[0], x[1]).as_povm(), 1);
  };
  const auto points = angle_grid(1, 24, 48);
  for (auto _ : state) benchmark::DoNotOptimize(scan_grid(f, points, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

void BM_Sweep(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  OptimizerConfig cfg;
  cfg.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cli::run_sweep("werner", grid, {}, {"discord", "one-way-deficit"}, Side::B, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

}  // namespace

BENCHMARK(BM_ScanGrid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

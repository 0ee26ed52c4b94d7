// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "modwalk/covariance.hpp"
#include "modwalk/discrepancy.hpp"
#include "modwalk/exact_law.hpp"
#include "modwalk/walk_sim.hpp"

using namespace modwalk;

namespace {

Exec exec_of(const benchmark::State& st) {
  return st.range(0) ? Exec::parallel : Exec::serial;
}

void BM_CharTable(benchmark::State& st) {
  const auto d = StepDistribution::heavy_tail(0.5, 1000, IrrationalAlpha::golden());
  for (auto _ : st) {
    benchmark::DoNotOptimize(char_table(d, 4096, exec_of(st)));
  }
}

void BM_Convolution(benchmark::State& st) {
  const auto d = StepDistribution::heavy_tail(0.5, 200, IrrationalAlpha::golden());
  for (auto _ : st) {
    benchmark::DoNotOptimize(integer_law_power(d, 40, 1e-12, exec_of(st)));
  }
}

void BM_FunctionalSums(benchmark::State& st) {
  const auto d = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        simulate_functional_sums(d, f, 4096, 256, 1, exec_of(st)));
  }
}

void BM_ReplicateDiscrepancy(benchmark::State& st) {
  const auto d = StepDistribution::pm_one_golden();
  const PathStatistic stat = [](std::span<const double> x) {
    return std::vector<double>{discrepancies(x).extreme};
  };
  for (auto _ : st) {
    benchmark::DoNotOptimize(replicate_statistics(d, 4096, 128, 1, stat, exec_of(st)));
  }
}

void BM_WindowVariance(benchmark::State& st) {
  const auto d = StepDistribution::pm_one_golden();
  const auto f = centered_indicator(0.0, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(window_variance_spectral(d, f, 0, 4096, 512, exec_of(st)));
  }
}

void BM_GammaGrid(benchmark::State& st) {
  const auto d = StepDistribution::pm_one_golden();
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        gamma_grid(d, equispaced_grid(129), 1e-6, 8192, exec_of(st)));
  }
}

}  // namespace

// Argument 0 runs the serial reference path, 1 the OpenMP path.
BENCHMARK(BM_CharTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateDiscrepancy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowVariance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GammaGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "ldpustat/generators.hpp"
#include "ldpustat/kernel.hpp"
#include "ldpustat/random.hpp"

using namespace ldpustat;

namespace {

StepKernel random_kernel(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Matrix v(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) v(i, j) = v(j, i) = 2.0 * rng.uniform() - 1.0;
  return StepKernel::uniform(std::move(v));
}

void BM_CutNormExact(benchmark::State& state) {
  const StepKernel w = random_kernel(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm_exact(w));
}
BENCHMARK(BM_CutNormExact)->DenseRange(6, 14, 4);

void BM_CutNormHeuristic(benchmark::State& state) {
  const StepKernel w = random_kernel(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm_heuristic(w));
}
BENCHMARK(BM_CutNormHeuristic)->RangeMultiplier(4)->Range(16, 1024);

void BM_PowerLawDifferenceL1(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const StepKernel wq = embed_matrix(power_law_coupling(n, 0.3, 7));
  const StepKernel w = power_law_limit(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(difference(wq, w), 1.0));
}
BENCHMARK(BM_PowerLawDifferenceL1)->Arg(500)->Arg(2000);

}  // namespace

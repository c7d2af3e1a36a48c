#include <benchmark/benchmark.h>

#include <optional>

#include "ldpustat/variational.hpp"

using namespace ldpustat;

namespace {

void BM_SolveCurieWeiss(benchmark::State& state) {
  const double theta = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_z_multilinear(Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::rademacher(), theta));
}
BENCHMARK(BM_SolveCurieWeiss)->Arg(4)->Arg(10)->Arg(-20);

void BM_SolvePotts(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_z_potts(Motif::edge(), StepKernel::constant(1.0), FiniteBaseMeasure::uniform_colors(3), 2.0));
}
BENCHMARK(BM_SolvePotts);

void BM_ConstrainedRate(benchmark::State& state) {
  const VariationalProblem problem{Family::multilinear, Motif::edge(), StepKernel::constant(1.0),
                                   FiniteBaseMeasure::rademacher(), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(constrained_rate(problem, 0.25));
}
BENCHMARK(BM_ConstrainedRate);

}  // namespace

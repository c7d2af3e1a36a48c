#include <benchmark/benchmark.h>

#include "ldpustat/generators.hpp"
#include "ldpustat/gibbs.hpp"
#include "ldpustat/random.hpp"
#include "ldpustat/ustat.hpp"

using namespace ldpustat;

namespace {

DataVector random_signs(std::size_t n) {
  Rng rng(11);
  DataVector x{std::vector<std::size_t>(n)};
  for (auto& v : x.indices) v = rng.below(2);
  return x;
}

void BM_VStatisticTriangle(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto q = erdos_renyi_adjacency(n, 0.5, 5);
  const auto x = random_signs(n);
  const auto phi = PhiKernel::product(3, {-1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(v_statistic(Motif::triangle(), q, x, phi));
}
BENCHMARK(BM_VStatisticTriangle)->RangeMultiplier(2)->Range(32, 256);

void BM_VStatisticTreePath(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto q = erdos_renyi_adjacency(n, 0.5, 5);
  const auto x = random_signs(n);
  const auto phi = PhiKernel::product(4, {-1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(v_statistic_tree(Motif::path(4), q, x, phi));
}
BENCHMARK(BM_VStatisticTreePath)->RangeMultiplier(4)->Range(64, 1024);

void BM_GlauberSweepCurieWeiss(benchmark::State& state) {
  const auto model = GibbsModel::ising_complete(static_cast<std::size_t>(state.range(0)), 1.0);
  ChainConfig cfg;
  cfg.burn_in = 0;
  cfg.sweeps = 10;
  for (auto _ : state) benchmark::DoNotOptimize(glauber_chain(model, cfg));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_GlauberSweepCurieWeiss)->Arg(400)->Arg(2000);

void BM_ExactPottsTwinReduced(benchmark::State& state) {
  const auto model = GibbsModel::potts_complete(static_cast<std::size_t>(state.range(0)), 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_logz(model));
}
BENCHMARK(BM_ExactPottsTwinReduced)->Arg(20)->Arg(40);

}  // namespace

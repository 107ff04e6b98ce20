#include "lyapdisc/contraction.hpp"
#include "lyapdisc/discretizer.hpp"
#include "lyapdisc/estimator.hpp"
#include "lyapdisc/mc_oracle.hpp"
#include "support.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace lyapdisc;

void BM_KappaAlpha(benchmark::State& state) {
  const Cocycle c = iterate_cocycle(testing::example1_base(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kappa_alpha(c, 0.5, 4096).kappa_upper);
  state.SetLabel(std::to_string(c.size()) + " matrices");
}
BENCHMARK(BM_KappaAlpha)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Discretize(benchmark::State& state) {
  const Cocycle c = iterate_cocycle(testing::example1_base(), 3);
  const Mesh mesh = Mesh::uniform(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(c, mesh).pmatrix.nonzeros());
}
BENCHMARK(BM_Discretize)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Stationary(benchmark::State& state) {
  const Cocycle c = iterate_cocycle(testing::example1_base(), 3);
  const Discretization d = discretize(c, Mesh::uniform(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(stationary(d).residual);
}
BENCHMARK(BM_Stationary)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_HolderEstimate(benchmark::State& state) {
  const auto f = [](double t) { return std::sin(2 * t) + 0.3 * std::cos(6 * t); };
  for (auto _ : state) benchmark::DoNotOptimize(holder_estimate(f, 0.5).value);
}
BENCHMARK(BM_HolderEstimate)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const Cocycle c = testing::example3_base();
  for (auto _ : state) benchmark::DoNotOptimize(mc_l1(c, static_cast<std::uint64_t>(state.range(0)), 4, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

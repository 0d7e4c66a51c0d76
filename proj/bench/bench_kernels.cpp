#include <benchmark/benchmark.h>

#include "npcd/baselines.hpp"
#include "npcd/bench.hpp"
#include "npcd/ecut.hpp"
#include "npcd/residual_table.hpp"

namespace {

using namespace npcd;

Dataset fixture(int d, int n) {
  PriorSpec p;
  p.d = d;
  Rng rng(42);
  return simulate(sample_prior(p, rng), n, 1.0, rng);
}

void BM_ResidualTable(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(ResidualTable::build(data, data.dim() - 1));
}
void BM_ResidualTableSerial(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(ResidualTable::build_serial(data, data.dim() - 1));
}
BENCHMARK(BM_ResidualTable)->Arg(6)->Arg(10);
BENCHMARK(BM_ResidualTableSerial)->Arg(6)->Arg(10);

void BM_Discover(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(discover(data, EcutConfig{}));
}
void BM_DiscoverSerial(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(discover_serial(data, EcutConfig{}));
}
BENCHMARK(BM_Discover)->Arg(5)->Arg(8);
BENCHMARK(BM_DiscoverSerial)->Arg(5)->Arg(8);

void BM_OrderingSearch(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(search_orderings(data));
}
void BM_OrderingSearchSerial(benchmark::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(search_orderings_serial(data));
}
BENCHMARK(BM_OrderingSearch)->Arg(5)->Arg(7);
BENCHMARK(BM_OrderingSearchSerial)->Arg(5)->Arg(7);

void BM_Experiment(benchmark::State& state) {
  ExperimentSpec spec;
  spec.trials = 50;
  spec.methods = {MethodSpec{}};
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec));
}
void BM_ExperimentSerial(benchmark::State& state) {
  ExperimentSpec spec;
  spec.trials = 50;
  spec.methods = {MethodSpec{}};
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(spec));
}
BENCHMARK(BM_Experiment);
BENCHMARK(BM_ExperimentSerial);

}  // namespace

BENCHMARK_MAIN();

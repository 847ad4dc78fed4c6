#include <benchmark/benchmark.h>

#include "photonlink/absorber.hpp"
#include "photonlink/rng.hpp"
#include "photonlink/simulator.hpp"

using namespace photonlink;

namespace {

void BM_CounterRng(benchmark::State& state) {
  CounterRng rng(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_double());
  }
}
BENCHMARK(BM_CounterRng);

void BM_SamplePoisson(benchmark::State& state) {
  CounterRng rng(3, 4);
  const double mean = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_poisson(mean, rng));
  }
}
BENCHMARK(BM_SamplePoisson)->Arg(4)->Arg(100)->Arg(1250);

void BM_RunSimulation(benchmark::State& state) {
  SimConfig config;
  config.stats = {5.0, 1.0, 0.9};
  config.detector = DetectorKind::map;
  config.n_symbols = 10000;
  config.seed = 17;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(config));
  }
}
BENCHMARK(BM_RunSimulation);

void BM_ChainResponse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<AbsorberCoupling> chain(n, AbsorberCoupling{{2.0, 0.3}});
  std::vector<double> phases(n > 0 ? n - 1 : 0, 1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_response(chain, phases));
  }
}
BENCHMARK(BM_ChainResponse)->Arg(1)->Arg(8)->Arg(32);

void BM_OptimizeChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_chain(n));
  }
}
BENCHMARK(BM_OptimizeChain)->Arg(2)->Arg(6);

}  // namespace

BENCHMARK_MAIN();

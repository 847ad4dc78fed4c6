#include <benchmark/benchmark.h>

#include "photonlink/hbt_channel.hpp"
#include "photonlink/poisson_channel.hpp"

using namespace photonlink;

namespace {

// Detected means near the room-temperature operating point.
const SlotStatistics kLinkStats{190.4, 1250.2, 0.9};

void BM_CrossoverProbs(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(crossover_probs(kLinkStats, 1209));
  }
}
BENCHMARK(BM_CrossoverProbs);

void BM_BacMutualInformation(benchmark::State& state) {
  const BinaryChannel ch = crossover_probs(kLinkStats, 1209);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bac_mutual_information(ch, 0.5));
  }
}
BENCHMARK(BM_BacMutualInformation);

void BM_SoftMutualInformation(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(soft_mutual_information(kLinkStats, 0.5));
  }
}
BENCHMARK(BM_SoftMutualInformation);

void BM_OptimizeHardDecision(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_hard_decision(kLinkStats));
  }
}
BENCHMARK(BM_OptimizeHardDecision);

void BM_HbtMutualInformation(benchmark::State& state) {
  HbtChannelParams params;
  params.coherent_probs = {0.25, 0.25, 0.25};
  params.thermal_probs = {0.36, 0.07, 0.07};
  params.stats = {static_cast<double>(state.range(0)), 4.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hbt_mutual_information(params, 0.5, {false, 10.0, 5.0}));
  }
}
BENCHMARK(BM_HbtMutualInformation)->Arg(2)->Arg(8)->Arg(32);

void BM_HbtOptimalPrior(benchmark::State& state) {
  HbtChannelParams params;
  params.coherent_probs = {0.25, 0.25, 0.25};
  params.thermal_probs = {0.36, 0.07, 0.07};
  params.stats = {8.0, 4.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_prior(params));
  }
}
BENCHMARK(BM_HbtOptimalPrior);

}  // namespace

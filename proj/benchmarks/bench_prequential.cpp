#include <benchmark/benchmark.h>

#include "ebsbm/generator.hpp"
#include "ebsbm/prequential.hpp"
#include "ebsbm/search.hpp"

namespace {

using namespace ebsbm;

void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const EdgeSampler sampler(diagonal_model(n, 4));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(2800, Seed{++seed, 1}));
  }
  state.SetItemsProcessed(state.iterations() * 2800);
}
BENCHMARK(BM_Sample)->Arg(128)->Arg(1024);

// Scoring cost as the partition gets finer.
void BM_Score(benchmark::State& state) {
  const auto blocks = static_cast<std::size_t>(state.range(0));
  const auto edges = sample_edges(diagonal_model(128, 4), 2800, Seed{1, 1});
  const auto partition = uniform_blocks(128, blocks);
  for (auto _ : state) benchmark::DoNotOptimize(score(edges, partition));
  state.SetItemsProcessed(state.iterations() * 2800);
}
BENCHMARK(BM_Score)->RangeMultiplier(4)->Range(1, 128);

void BM_Evaluate(benchmark::State& state) {
  const auto edges = sample_edges(diagonal_model(128, 4), 2800, Seed{1, 1});
  const auto partition = uniform_blocks(128, 4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(edges, partition));
  state.SetItemsProcessed(state.iterations() * 2800);
}
BENCHMARK(BM_Evaluate);

void BM_AveragedScore(benchmark::State& state) {
  const auto orders = static_cast<std::size_t>(state.range(0));
  const auto edges = sample_edges(diagonal_model(128, 4), 2800, Seed{1, 1});
  const auto partition = uniform_blocks(128, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_code_length(edges, partition, orders, Seed{2, 2}));
  }
}
BENCHMARK(BM_AveragedScore)->Arg(1)->Arg(10);

void BM_DyadicSearch(benchmark::State& state) {
  const auto edges = sample_edges(diagonal_model(128, 4), 2800, Seed{1, 1});
  const auto family = dyadic_family(128, 7);
  SearchOptions options;
  options.num_orders = static_cast<std::size_t>(state.range(0));
  options.seed = Seed{3, 3};
  for (auto _ : state) benchmark::DoNotOptimize(best_partition(edges, family, options));
}
BENCHMARK(BM_DyadicSearch)->Arg(0)->Arg(10);

// The 33-block merge-split model.
void BM_HeterogeneousSample(benchmark::State& state) {
  std::vector<std::size_t> sizes{128};
  std::vector<double> probs{0.00006};
  for (int i = 0; i < 32; ++i) {
    sizes.push_back(4);
    probs.push_back(0.00076);
  }
  const EdgeSampler sampler(heterogeneous_model(256, sizes, probs, true));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(2000, Seed{++seed, 1}));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_HeterogeneousSample);

}  // namespace

BENCHMARK_MAIN();

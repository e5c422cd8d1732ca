#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "sentinel/metrics.hpp"
#include "sentinel/pri.hpp"
#include "sentinel/trainer.hpp"

namespace {

using namespace sentinel;

std::vector<EnrichedRecord> journal(std::size_t n) {
  testing::Rng rng(n);
  return testing::labeled(testing::random_trainable_journal(rng, n, HistoryMode::CausalPrefix),
                          HistoryMode::CausalPrefix);
}

void BM_LabelPri(benchmark::State& state) {
  testing::Rng rng(1);
  const auto rows = enrich(testing::random_journal(rng, static_cast<std::size_t>(state.range(0))));
  const auto mode = state.range(1) ? HistoryMode::CausalPrefix : HistoryMode::FullHistory;
  for (auto _ : state) benchmark::DoNotOptimize(label_pri(rows, mode));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LabelPri)->ArgsProduct({{100, 1000, 10000}, {0, 1}})->Complexity();

void BM_Fit(benchmark::State& state) {
  testing::Rng rng(2);
  const auto data = testing::random_dataset(rng, static_cast<std::size_t>(state.range(0)), 5, 40);
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, {5, 2, 1}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_IterativeRun(benchmark::State& state) {
  const auto data = to_dataset(journal(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(iterative_run(data, {5, 2, 1}, TrainMode::InclusivePrefix));
}
BENCHMARK(BM_IterativeRun)->Arg(60)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_GridSearch(benchmark::State& state) {
  const auto data = to_dataset(journal(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search(data, ParamGrid::standard(), TrainMode::InclusivePrefix));
  }
}
BENCHMARK(BM_GridSearch)->Arg(60)->Arg(250)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Roc(benchmark::State& state) {
  testing::Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = static_cast<double>(rng() % 1000) / 1000;
    labels[i] = static_cast<int>(i % 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_binary(scores, labels));
}
BENCHMARK(BM_Roc)->Arg(1000)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();

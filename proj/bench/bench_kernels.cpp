// Serial reference vs OpenMP kernels on synthetic inputs.

#include <benchmark/benchmark.h>

#include <random>

#include "fixrank/patch_classifier.hpp"
#include "fixrank/ranker.hpp"
#include "fixrank/trainer.hpp"
#include "synthetic.hpp"

using namespace fixrank;

namespace {

std::vector<std::vector<SourcePair>> patch_batch(std::size_t n) {
  std::mt19937_64 rng(7);
  auto templates = fixture::background_templates();
  for (const auto& t : fixture::dominant_templates()) templates.push_back(t);
  std::vector<std::vector<SourcePair>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({fixture::make_java_patch(templates[i % templates.size()], rng)});
  return out;
}

const std::vector<CorpusRecord>& corpus() {
  static const auto records = [] {
    std::mt19937_64 rng(8);
    return fixture::random_records(200000, rng, 500);
  }();
  return records;
}

const std::vector<std::vector<ClassifiedCandidate>>& bugs() {
  static const auto out = [] {
    std::mt19937_64 rng(9);
    auto pool = fixture::random_records(20000, rng, 200);
    std::vector<std::vector<ClassifiedCandidate>> bugs(2000);
    for (std::size_t b = 0; b < bugs.size(); ++b)
      for (int r = 1; r <= 10; ++r) {
        ClassifiedCandidate c;
        c.candidate.bug_id = "bug" + std::to_string(b);
        c.candidate.patch_id = c.candidate.bug_id + "-" + std::to_string(r);
        c.candidate.original_rank = r;
        c.kind = pool[b * 10 + static_cast<std::size_t>(r) - 1].kind;
        bugs[b].push_back(std::move(c));
      }
    return bugs;
  }();
  return out;
}

void BM_ClassifySerial(benchmark::State& state) {
  auto batch = patch_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_batch_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClassifyParallel(benchmark::State& state) {
  auto batch = patch_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_batch(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrainSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(train_serial(corpus()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

void BM_TrainParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(train(corpus()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

void BM_RankSerial(benchmark::State& state) {
  auto model = train(corpus());
  for (auto _ : state) benchmark::DoNotOptimize(rank_bugs_serial(model, bugs()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bugs().size()));
}

void BM_RankParallel(benchmark::State& state) {
  auto model = train(corpus());
  for (auto _ : state) benchmark::DoNotOptimize(rank_bugs(model, bugs()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bugs().size()));
}

}  // namespace

BENCHMARK(BM_ClassifySerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

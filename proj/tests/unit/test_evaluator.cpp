#include <gtest/gtest.h>

#include <random>

#include "error_code.hpp"
#include "fixrank/catalog.hpp"
#include "fixrank/evaluator.hpp"
#include "fixrank/trainer.hpp"
#include "synthetic.hpp"

using namespace fixrank;

namespace {

BugOutcome outcome(int original, int reranked, int patches = 10) {
  BugOutcome o;
  o.bug_id = "b";
  o.tool_id = "t";
  o.original_first_correct_rank = original;
  o.reranked_first_correct_rank = reranked;
  o.num_patches = patches;
  return o;
}

EvaluationBug evaluation_bug(const fixture::PlantedBug& planted) {
  EvaluationBug bug;
  bug.bug_id = planted.candidates.front().bug_id;
  bug.tools.push_back(classify_candidates(planted.candidates));
  return bug;
}

}  // namespace

TEST(TopK, WorkedPartition) {
  std::vector<BugOutcome> outcomes{outcome(1, 1), outcome(1, 4), outcome(5, 2), outcome(7, 9), outcome(3, 3)};
  EXPECT_EQ(partition_topk(outcomes, 1), (TopKPartition{1, 3, 1, 1, 0}));
  EXPECT_EQ(partition_topk(outcomes, 3), (TopKPartition{3, 1, 2, 1, 1}));
  EXPECT_EQ(partition_topk(outcomes, 10), (TopKPartition{10, 0, 5, 0, 0}));
  EXPECT_EQ(fixture::error_code_of([&] { partition_topk(outcomes, 0); }), ErrorCode::InvalidArgument);
}

TEST(TopK, PartitionAgreesWithCellCounts) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> rank(1, 12), k_of(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<BugOutcome> outcomes(static_cast<std::size_t>(rank(rng)));
    for (auto& o : outcomes) o = outcome(rank(rng), rank(rng));
    int k = k_of(rng);
    auto p = partition_topk(outcomes, k);
    std::size_t cells[2][2] = {{0, 0}, {0, 0}};
    for (const auto& o : outcomes) ++cells[o.original_first_correct_rank <= k][o.reranked_first_correct_rank <= k];
    EXPECT_EQ(p.n_count, cells[0][0]);
    EXPECT_EQ(p.p_count, cells[0][1]);
    EXPECT_EQ(p.o_count, cells[1][0]);
    EXPECT_EQ(p.b_count, cells[1][1]);
    EXPECT_EQ(p.total(), outcomes.size());
  }
}

TEST(RankSummary, LowerMiddleMedian) {
  EXPECT_EQ(summarize_ranks({4, 1, 3, 2}), (RankSummary{1, 2.5, 2, 4}));
  EXPECT_EQ(summarize_ranks({5}), (RankSummary{5, 5.0, 5, 5}));
  EXPECT_EQ(summarize_ranks({9, 1, 4}), (RankSummary{1, 14.0 / 3.0, 4, 9}));
  EXPECT_EQ(fixture::error_code_of([] { summarize_ranks({}); }), ErrorCode::EmptyOutcomes);
  EXPECT_EQ(fixture::error_code_of([] { rank_statistics({}); }), ErrorCode::EmptyOutcomes);
  auto stats = rank_statistics({outcome(3, 1), outcome(1, 2)});
  EXPECT_EQ(stats.original, (RankSummary{1, 2.0, 1, 3}));
  EXPECT_EQ(stats.reranked, (RankSummary{1, 1.5, 1, 2}));
}

TEST(RankSummary, MedianAgreesWithSortedOracle) {
  std::mt19937_64 rng(72);
  std::uniform_int_distribution<int> rank(1, 50), size(1, 30);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> ranks(static_cast<std::size_t>(size(rng)));
    for (auto& r : ranks) r = rank(rng);
    auto s = summarize_ranks(ranks);
    // lower middle: at least half the values are <= median and more than half are >= it
    auto le = std::count_if(ranks.begin(), ranks.end(), [&](int r) { return r <= s.median; });
    auto ge = std::count_if(ranks.begin(), ranks.end(), [&](int r) { return r >= s.median; });
    EXPECT_GE(2 * le, static_cast<long>(ranks.size()));
    EXPECT_GT(2 * ge, static_cast<long>(ranks.size()));
    EXPECT_NE(std::find(ranks.begin(), ranks.end(), s.median), ranks.end());
  }
}

TEST(Outcome, OriginalRankIsTieOrderPosition) {
  auto c = [](const std::string& id, const std::string& tool, int rank, bool correct) {
    ClassifiedCandidate x;
    x.candidate.patch_id = id;
    x.candidate.bug_id = "b";
    x.candidate.tool_id = tool;
    x.candidate.original_rank = rank;
    x.candidate.correctness_label = correct ? Correctness::Correct : Correctness::PlausibleIncorrect;
    x.kind = correct ? PatchKind{"null_check.add"} : PatchKind{"throw.add"};
    return x;
  };
  // tool A has no correct patch; B's correct patch is its second
  auto ordered = tie_break_order({{c("a1", "A", 1, false), c("a2", "A", 2, false)},
                                  {c("b2", "B", 2, true), c("b1", "B", 1, false)}});
  std::vector<FrequencyModel::KindCounts> counts{{{"null_check.add", 2}, {"throw.add", 1}}, {}, {}};
  FrequencyModel model(CategorySet::standard(), counts, Catalog::builtin().version(), "x");
  auto ranking = rank_classified(model, ordered);
  auto o = make_outcome(ordered, ranking, "cumulative");
  ASSERT_TRUE(o);
  EXPECT_EQ(o->original_first_correct_rank, 4);
  EXPECT_EQ(o->reranked_first_correct_rank, 1);
  EXPECT_EQ(o->num_patches, 4);
  EXPECT_EQ(o->category.name(), "logic");
  EXPECT_EQ(first_correct_rank(ranking), 1);

  auto none = tie_break_order({{c("a1", "A", 1, false)}});
  EXPECT_FALSE(make_outcome(none, rank_classified(model, none), "A"));
}

TEST(Outcome, FilterByPatchCount) {
  std::vector<BugOutcome> outcomes{outcome(1, 1, 3), outcome(1, 1, 4), outcome(1, 1, 9)};
  EXPECT_EQ(filter_outcomes(outcomes).size(), 2u);
  EXPECT_EQ(filter_outcomes(outcomes, 1).size(), 3u);
}

TEST(Evaluate, PlantedBugsRankTheDominantPatchFirst) {
  std::mt19937_64 rng(73);
  fixture::PlantedSignalConfig config;
  auto model = train(fixture::planted_corpus(config, rng));
  std::vector<EvaluationBug> bugs;
  for (std::size_t i = 0; i < 6; ++i)
    bugs.push_back(evaluation_bug(fixture::planted_bug(i % 3, config, "bug" + std::to_string(i), rng)));
  auto outcomes = evaluate_bugs(model, bugs);
  ASSERT_EQ(outcomes.size(), 6u);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    EXPECT_EQ(outcomes[i].reranked_first_correct_rank, 1);
    EXPECT_EQ(outcomes[i].category.name(), CategorySet::standard().names()[i % 3]);
    EXPECT_EQ(outcomes[i].tool_id, "synthetic");
  }
}

TEST(Sweep, FullSamplesReproduceTheBaseline) {
  std::mt19937_64 rng(74);
  fixture::PlantedSignalConfig config;
  config.category_sizes = {120, 300, 60};
  auto records = fixture::planted_corpus(config, rng);
  std::vector<EvaluationBug> bugs;
  for (std::size_t i = 0; i < 6; ++i)
    bugs.push_back(evaluation_bug(fixture::planted_bug(i % 3, config, "bug" + std::to_string(i), rng)));

  std::vector<SamplePlan> plans{{"all", proportional_sizes(records, 1.0)}, {"tenth", proportional_sizes(records, 0.1)}};
  auto report = robustness_sweep(records, plans, {1, 2, 3}, bugs);
  EXPECT_EQ(report.outcomes, 6u);
  ASSERT_EQ(report.results.size(), 2u);
  const auto& all = report.results[0];
  EXPECT_EQ(all.runs.size(), 3u);
  EXPECT_EQ(all.mean_same, 6.0);
  EXPECT_EQ(all.top1_rate, static_cast<double>(report.baseline_top1) / 6.0);
  for (const auto& run : report.results[1].runs) EXPECT_EQ(run.worse + run.same + run.better, 6u);
  EXPECT_EQ(report.results[1].runs.at(0).topk.at(1).total(), 6u);

  auto again = robustness_sweep(records, plans, {1, 2, 3}, bugs);
  EXPECT_EQ(render_sweep(again), render_sweep(report));
  EXPECT_EQ(fixture::error_code_of([&] { robustness_sweep(records, plans, {}, bugs); }), ErrorCode::InvalidArgument);
  std::vector<SamplePlan> too_big{{"big", {{"logic", 121}}}};
  EXPECT_EQ(fixture::error_code_of([&] { robustness_sweep(records, too_big, {1}, bugs); }),
            ErrorCode::InsufficientRecords);
}

TEST(Render, Tables) {
  std::vector<BugOutcome> outcomes{outcome(1, 1), outcome(4, 2)};
  EXPECT_EQ(render_scatter(outcomes), "tool\tbug\toriginal_rank\tfixrank_rank\nt\tb\t1\t1\nt\tb\t4\t2\n");
  EXPECT_EQ(render_topk_table(outcomes, {1, 3}),
            "k\tN\tB\tO\tP\toriginal_topk\tfixrank_topk\n1\t1\t1\t0\t0\t1\t1\n3\t0\t1\t0\t1\t1\t2\n");
  EXPECT_EQ(render_rank_statistics(rank_statistics(outcomes)),
            "source\tmin\tmean\tmedian\tmax\noriginal\t1\t2.50\t1\t4\nfixrank\t1\t1.50\t1\t2\n");
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixrank/catalog.hpp"
#include "fixrank/category.hpp"
#include "fixrank/corpus.hpp"
#include "fixrank/ranker.hpp"

namespace fixrank {

struct BugOutcome {
  std::string bug_id;
  std::string tool_id;
  int original_first_correct_rank = 0;
  int reranked_first_correct_rank = 0;
  int num_patches = 0;
  BugCategory category;
};

/// Lowest final rank among correct patches, or none.
std::optional<int> first_correct_rank(const std::vector<RankedPatch>& ranking);

/// Outcome of one ranked bug; none when no patch is labeled correct.
/// `original_first_correct_rank` is the position in the tool's own order
/// (tool order, then original rank), so it is defined for merged sets too.
std::optional<BugOutcome> make_outcome(const std::vector<ClassifiedCandidate>& tie_ordered,
                                       const std::vector<RankedPatch>& ranking, const std::string& tool_id);

/// Drops outcomes with fewer than `min_patches` candidates.
std::vector<BugOutcome> filter_outcomes(const std::vector<BugOutcome>& outcomes, int min_patches = 4);

struct TopKPartition {
  int k = 0;
  std::size_t n_count = 0;  // neither ranking has a correct patch in the top k
  std::size_t b_count = 0;  // both do
  std::size_t o_count = 0;  // only the original ranking does
  std::size_t p_count = 0;  // only the re-ranking does

  std::size_t total() const { return n_count + b_count + o_count + p_count; }
  friend bool operator==(const TopKPartition&, const TopKPartition&) = default;
};

/// Throws InvalidArgument when k < 1.
TopKPartition partition_topk(const std::vector<BugOutcome>& outcomes, int k);

struct RankSummary {
  int min = 0;
  double mean = 0.0;
  int median = 0;  // lower middle for even counts
  int max = 0;

  friend bool operator==(const RankSummary&, const RankSummary&) = default;
};

struct RankStatistics {
  RankSummary original;
  RankSummary reranked;
};

/// Throws EmptyOutcomes.
RankStatistics rank_statistics(const std::vector<BugOutcome>& outcomes);
RankSummary summarize_ranks(std::vector<int> ranks);

/// One bug as seen by the sweep: its per-tool candidate sets, classified.
struct EvaluationBug {
  std::string bug_id;
  std::vector<std::vector<ClassifiedCandidate>> tools;
};

struct SamplePlan {
  std::string name;
  std::map<std::string, std::size_t> sizes;  // per category
};

struct SweepRun {
  std::uint64_t seed = 0;
  std::size_t worse = 0;
  std::size_t same = 0;
  std::size_t better = 0;
  std::size_t top1 = 0;  // outcomes with the first correct patch at rank 1
  std::map<int, TopKPartition> topk;
};

struct SweepResult {
  SamplePlan plan;
  std::vector<SweepRun> runs;
  double mean_worse = 0.0;
  double mean_same = 0.0;
  double mean_better = 0.0;
  double top1_rate = 0.0;  // mean over seeds of top1 / outcomes
};

struct SweepReport {
  std::size_t outcomes = 0;  // bugs with a correct patch
  std::size_t baseline_top1 = 0;
  std::vector<BugOutcome> baseline;
  std::vector<SweepResult> results;
};

/// Retrains on each stratified sample and compares every bug's first
/// correct rank against the model trained on all of `records`. Results are
/// averaged over seeds. Throws InvalidArgument on an empty seed list and
/// InsufficientRecords on an infeasible plan.
SweepReport robustness_sweep(const std::vector<CorpusRecord>& records, const std::vector<SamplePlan>& plans,
                             const std::vector<std::uint64_t>& seeds, const std::vector<EvaluationBug>& bugs,
                             const std::vector<int>& ks = {1, 3, 5, 10}, const Catalog& catalog = Catalog::builtin(),
                             const CategorySet& categories = CategorySet::standard());

/// Outcomes of ranking each bug's merged tool sets with `model`.
std::vector<BugOutcome> evaluate_bugs(const FrequencyModel& model, const std::vector<EvaluationBug>& bugs);

/// `tool<TAB>bug<TAB>original_rank<TAB>fixrank_rank` rows under a header.
std::string render_scatter(const std::vector<BugOutcome>& outcomes);
void scatter_export(const std::vector<BugOutcome>& outcomes, const std::filesystem::path& path);

/// Tab-separated tables: top-k partitions, rank statistics, sweep results.
std::string render_topk_table(const std::vector<BugOutcome>& outcomes, const std::vector<int>& ks);
std::string render_rank_statistics(const RankStatistics& stats);
std::string render_sweep(const SweepReport& report);

}  // namespace fixrank

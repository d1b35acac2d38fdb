#include "fixrank/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <numeric>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"
#include "fixrank/trainer.hpp"

namespace fixrank {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string summary_row(std::string_view source, const RankSummary& s) {
  return std::string(source) + '\t' + std::to_string(s.min) + '\t' + fmt(s.mean) + '\t' + std::to_string(s.median) +
         '\t' + std::to_string(s.max) + '\n';
}

}  // namespace

std::optional<int> first_correct_rank(const std::vector<RankedPatch>& ranking) {
  std::optional<int> best;
  for (const auto& r : ranking)
    if (r.candidate.correctness_label == Correctness::Correct && (!best || r.final_rank < *best)) best = r.final_rank;
  return best;
}

std::optional<BugOutcome> make_outcome(const std::vector<ClassifiedCandidate>& tie_ordered,
                                       const std::vector<RankedPatch>& ranking, const std::string& tool_id) {
  auto reranked = first_correct_rank(ranking);
  if (!reranked) return std::nullopt;
  int original = 0;
  for (std::size_t i = 0; i < tie_ordered.size(); ++i) {
    if (tie_ordered[i].candidate.correctness_label == Correctness::Correct) {
      original = static_cast<int>(i + 1);
      break;
    }
  }
  BugOutcome o;
  o.bug_id = ranking.front().candidate.bug_id;
  o.tool_id = tool_id;
  o.original_first_correct_rank = original;
  o.reranked_first_correct_rank = *reranked;
  o.num_patches = static_cast<int>(ranking.size());
  o.category = ranking.front().estimated_category;
  return o;
}

std::vector<BugOutcome> filter_outcomes(const std::vector<BugOutcome>& outcomes, int min_patches) {
  std::vector<BugOutcome> out;
  std::copy_if(outcomes.begin(), outcomes.end(), std::back_inserter(out),
               [&](const BugOutcome& o) { return o.num_patches >= min_patches; });
  return out;
}

TopKPartition partition_topk(const std::vector<BugOutcome>& outcomes, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  TopKPartition p;
  p.k = k;
  for (const auto& o : outcomes) {
    bool orig = o.original_first_correct_rank <= k;
    bool ours = o.reranked_first_correct_rank <= k;
    if (orig && ours)
      ++p.b_count;
    else if (orig)
      ++p.o_count;
    else if (ours)
      ++p.p_count;
    else
      ++p.n_count;
  }
  return p;
}

RankSummary summarize_ranks(std::vector<int> ranks) {
  if (ranks.empty()) fail(ErrorCode::EmptyOutcomes, "no ranks to summarize");
  std::sort(ranks.begin(), ranks.end());
  RankSummary s;
  s.min = ranks.front();
  s.max = ranks.back();
  s.mean = std::accumulate(ranks.begin(), ranks.end(), 0.0) / static_cast<double>(ranks.size());
  s.median = ranks[(ranks.size() - 1) / 2];
  return s;
}

RankStatistics rank_statistics(const std::vector<BugOutcome>& outcomes) {
  if (outcomes.empty()) fail(ErrorCode::EmptyOutcomes, "no outcomes");
  std::vector<int> orig, ours;
  for (const auto& o : outcomes) {
    orig.push_back(o.original_first_correct_rank);
    ours.push_back(o.reranked_first_correct_rank);
  }
  return {summarize_ranks(std::move(orig)), summarize_ranks(std::move(ours))};
}

std::vector<BugOutcome> evaluate_bugs(const FrequencyModel& model, const std::vector<EvaluationBug>& bugs) {
  std::vector<std::optional<BugOutcome>> slots(bugs.size());
  std::vector<std::exception_ptr> errors(bugs.size());
  const auto n = static_cast<std::ptrdiff_t>(bugs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      const auto& bug = bugs[k];
      auto ordered = tie_break_order(bug.tools);
      auto ranking = rank_classified(model, ordered);
      auto tool = bug.tools.size() == 1 ? ordered.front().candidate.tool_id : std::string("cumulative");
      slots[k] = make_outcome(ordered, ranking, tool);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<BugOutcome> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

SweepReport robustness_sweep(const std::vector<CorpusRecord>& records, const std::vector<SamplePlan>& plans,
                             const std::vector<std::uint64_t>& seeds, const std::vector<EvaluationBug>& bugs,
                             const std::vector<int>& ks, const Catalog& catalog, const CategorySet& categories) {
  if (seeds.empty()) fail(ErrorCode::InvalidArgument, "robustness sweep needs at least one seed");
  SweepReport report;
  report.baseline = evaluate_bugs(train(records, catalog, categories), bugs);
  report.outcomes = report.baseline.size();
  for (const auto& o : report.baseline)
    if (o.reranked_first_correct_rank == 1) ++report.baseline_top1;

  for (const auto& plan : plans) {
    SweepResult result;
    result.plan = plan;
    for (auto seed : seeds) {
      auto sample = stratified_sample(records, plan.sizes, seed);
      auto outcomes = evaluate_bugs(train(sample, catalog, categories), bugs);
      SweepRun run;
      run.seed = seed;
      // same bugs in the same order: correctness labels do not depend on the model
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto base = report.baseline[i].reranked_first_correct_rank;
        auto now = outcomes[i].reranked_first_correct_rank;
        if (now > base)
          ++run.worse;
        else if (now < base)
          ++run.better;
        else
          ++run.same;
        if (now == 1) ++run.top1;
      }
      for (int k : ks) run.topk[k] = partition_topk(outcomes, k);
      result.runs.push_back(std::move(run));
    }
    auto mean = [&](auto field) {
      double s = 0;
      for (const auto& r : result.runs) s += static_cast<double>(field(r));
      return s / static_cast<double>(result.runs.size());
    };
    result.mean_worse = mean([](const SweepRun& r) { return r.worse; });
    result.mean_same = mean([](const SweepRun& r) { return r.same; });
    result.mean_better = mean([](const SweepRun& r) { return r.better; });
    result.top1_rate = report.outcomes == 0 ? 0.0
                                            : mean([](const SweepRun& r) { return r.top1; }) /
                                                  static_cast<double>(report.outcomes);
    report.results.push_back(std::move(result));
  }
  return report;
}

std::string render_scatter(const std::vector<BugOutcome>& outcomes) {
  std::string out = "tool\tbug\toriginal_rank\tfixrank_rank\n";
  for (const auto& o : outcomes)
    out += o.tool_id + '\t' + o.bug_id + '\t' + std::to_string(o.original_first_correct_rank) + '\t' +
           std::to_string(o.reranked_first_correct_rank) + '\n';
  return out;
}

void scatter_export(const std::vector<BugOutcome>& outcomes, const std::filesystem::path& path) {
  write_file(path, render_scatter(outcomes));
}

std::string render_topk_table(const std::vector<BugOutcome>& outcomes, const std::vector<int>& ks) {
  std::string out = "k\tN\tB\tO\tP\toriginal_topk\tfixrank_topk\n";
  for (int k : ks) {
    auto p = partition_topk(outcomes, k);
    out += std::to_string(k) + '\t' + std::to_string(p.n_count) + '\t' + std::to_string(p.b_count) + '\t' +
           std::to_string(p.o_count) + '\t' + std::to_string(p.p_count) + '\t' + std::to_string(p.b_count + p.o_count) +
           '\t' + std::to_string(p.b_count + p.p_count) + '\n';
  }
  return out;
}

std::string render_rank_statistics(const RankStatistics& stats) {
  return "source\tmin\tmean\tmedian\tmax\n" + summary_row("original", stats.original) +
         summary_row("fixrank", stats.reranked);
}

std::string render_sweep(const SweepReport& report) {
  std::string out = "sample\tsize\tseeds\tworse\tsame\tbetter\ttop1_rate\n";
  for (const auto& r : report.results) {
    std::size_t size = 0;
    for (const auto& [c, n] : r.plan.sizes) size += n;
    out += r.plan.name + '\t' + std::to_string(size) + '\t' + std::to_string(r.runs.size()) + '\t' + fmt(r.mean_worse) +
           '\t' + fmt(r.mean_same) + '\t' + fmt(r.mean_better) + '\t' + fmt(r.top1_rate) + '\n';
  }
  return out;
}

}  // namespace fixrank

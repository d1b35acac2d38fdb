#include "fixrank/ranker.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <exception>
#include <set>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

using u128 = unsigned __int128;

void check_bug_ids(const std::vector<const PatchCandidate*>& all) {
  if (all.empty()) fail(ErrorCode::EmptyPatchSet, "no candidate patches");
  for (const auto* c : all)
    if (c->bug_id != all.front()->bug_id)
      fail(ErrorCode::MixedBugIds, "candidates for '" + all.front()->bug_id + "' and '" + c->bug_id + "'");
}

void check_unique_ranks(const std::vector<ClassifiedCandidate>& tool) {
  std::set<int> seen;
  for (const auto& c : tool) {
    if (c.candidate.original_rank < 1)
      fail(ErrorCode::InvalidArgument, c.candidate.patch_id + ": original rank must be positive");
    if (!seen.insert(c.candidate.original_rank).second)
      fail(ErrorCode::InvalidArgument, "duplicate original rank " + std::to_string(c.candidate.original_rank) +
                                           " for tool '" + c.candidate.tool_id + "'");
  }
}

std::string format_score(const Frequency& f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", f.value());
  return buf;
}

}  // namespace

std::string_view to_string(Correctness c) {
  return c == Correctness::Correct ? "correct" : "plausible_incorrect";
}

Correctness parse_correctness(std::string_view text) {
  if (text == "correct") return Correctness::Correct;
  if (text == "plausible_incorrect" || text == "incorrect") return Correctness::PlausibleIncorrect;
  fail(ErrorCode::InvalidArgument, "unknown correctness label '" + std::string(text) + "'");
}

BugCategory estimate_category_by_signature(const FrequencyModel& model, const std::vector<std::string>& signatures) {
  if (signatures.empty()) fail(ErrorCode::EmptyPatchSet, "cannot estimate a category from no patches");
  std::optional<std::size_t> best;
  std::uint64_t best_sum = 0;
  for (std::size_t c = 0; c < model.categories().size(); ++c) {
    auto total = model.total(c);
    if (total == 0) continue;
    std::uint64_t sum = 0;
    for (const auto& sig : signatures)
      if (__builtin_add_overflow(sum, model.count(c, sig), &sum))
        fail(ErrorCode::InvalidArgument, "frequency sum overflows");
    if (!best) {
      best = c;
      best_sum = sum;
      continue;
    }
    // sum/total vs best_sum/best_total, exactly
    auto best_total = model.total(*best);
    u128 lhs = static_cast<u128>(sum) * best_total;
    u128 rhs = static_cast<u128>(best_sum) * total;
    if (lhs > rhs || (lhs == rhs && total > best_total)) {
      best = c;
      best_sum = sum;
    }
  }
  if (!best) fail(ErrorCode::EmptyModel, "model has no training data in any category");
  return model.categories().at(*best);
}

BugCategory estimate_category(const FrequencyModel& model, const std::vector<PatchKind>& kinds) {
  std::vector<std::string> sigs;
  sigs.reserve(kinds.size());
  for (const auto& k : kinds) sigs.push_back(k.signature());
  return estimate_category_by_signature(model, sigs);
}

ClassifiedCandidate classify_candidate(const PatchCandidate& candidate, const Catalog& catalog) {
  auto result = classify_patch_detailed(candidate.source_pairs, catalog);
  return {candidate, std::move(result.kind), !result.parsed()};
}

std::vector<ClassifiedCandidate> classify_candidates(const std::vector<PatchCandidate>& candidates,
                                                     const Catalog& catalog) {
  std::vector<ClassifiedCandidate> out(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      out[k] = classify_candidate(candidates[k], catalog);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<RankedPatch> rank_classified(const FrequencyModel& model, const std::vector<ClassifiedCandidate>& input) {
  std::vector<const PatchCandidate*> all;
  for (const auto& c : input) all.push_back(&c.candidate);
  check_bug_ids(all);

  std::vector<std::string> sigs;
  sigs.reserve(input.size());
  for (const auto& c : input) sigs.push_back(c.kind.signature());
  auto category = estimate_category_by_signature(model, sigs);
  auto c = model.categories().require_index(category.name());

  std::vector<RankedPatch> ranked;
  ranked.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i)
    ranked.push_back({input[i].candidate, input[i].kind, model.exact_frequency(c, sigs[i]), 0, category,
                      input[i].unparseable});
  // one category, one denominator: counts order the scores
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedPatch& a, const RankedPatch& b) { return a.score.count > b.score.count; });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].final_rank = static_cast<int>(i + 1);
  return ranked;
}

std::vector<ClassifiedCandidate> tie_break_order(std::vector<std::vector<ClassifiedCandidate>> per_tool) {
  std::vector<ClassifiedCandidate> out;
  for (auto& tool : per_tool) {
    check_unique_ranks(tool);
    std::stable_sort(tool.begin(), tool.end(), [](const auto& a, const auto& b) {
      return a.candidate.original_rank < b.candidate.original_rank;
    });
    for (auto& c : tool) out.push_back(std::move(c));
  }
  std::vector<const PatchCandidate*> all;
  for (const auto& c : out) all.push_back(&c.candidate);
  check_bug_ids(all);
  return out;
}

std::vector<RankedPatch> rank_patches(const FrequencyModel& model, const std::vector<PatchCandidate>& candidates,
                                      const Catalog& catalog) {
  return rank_cumulative(model, {candidates}, catalog);
}

std::vector<RankedPatch> rank_cumulative(const FrequencyModel& model,
                                         const std::vector<std::vector<PatchCandidate>>& candidate_sets,
                                         const Catalog& catalog) {
  std::vector<std::vector<ClassifiedCandidate>> per_tool;
  per_tool.reserve(candidate_sets.size());
  for (const auto& set : candidate_sets) per_tool.push_back(classify_candidates(set, catalog));
  return rank_classified(model, tie_break_order(std::move(per_tool)));
}

std::vector<std::vector<RankedPatch>> rank_bugs_serial(const FrequencyModel& model,
                                                       const std::vector<std::vector<ClassifiedCandidate>>& bugs) {
  std::vector<std::vector<RankedPatch>> out;
  out.reserve(bugs.size());
  for (const auto& b : bugs) out.push_back(rank_classified(model, b));
  return out;
}

std::vector<std::vector<RankedPatch>> rank_bugs(const FrequencyModel& model,
                                                const std::vector<std::vector<ClassifiedCandidate>>& bugs) {
  std::vector<std::vector<RankedPatch>> out(bugs.size());
  std::vector<std::exception_ptr> errors(bugs.size());
  const auto n = static_cast<std::ptrdiff_t>(bugs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      out[k] = rank_classified(model, bugs[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string format_ranking(const std::vector<RankedPatch>& ranking) {
  std::string out = "bug_id\tfinal_rank\tpatch_id\tscore\tkind_signature\testimated_category\n";
  for (const auto& r : ranking) {
    out += r.candidate.bug_id + '\t' + std::to_string(r.final_rank) + '\t' + r.candidate.patch_id + '\t' +
           format_score(r.score) + '\t' + r.kind.signature() + '\t' + r.estimated_category.name() + '\n';
  }
  return out;
}

BugManifest parse_manifest(std::string_view text, const std::filesystem::path& base) {
  BugManifest m;
  std::vector<std::string> tool_ids;
  auto resolve = [&](std::string_view p) {
    std::filesystem::path path{std::string(p)};
    return path.is_absolute() ? path : base / path;
  };
  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    auto where = [&] { return "manifest line " + std::to_string(line_no) + ": "; };
    if (line.empty() || starts_with(line, "#")) continue;
    if (starts_with(line, "bug_id:")) {
      if (!m.bug_id.empty()) fail(ErrorCode::InvalidArgument, where() + "second bug_id");
      m.bug_id = std::string(trim(line.substr(7)));
      continue;
    }
    if (starts_with(line, "tool_id:")) {
      auto tool = std::string(trim(line.substr(8)));
      if (tool.empty()) fail(ErrorCode::InvalidArgument, where() + "empty tool_id");
      tool_ids.push_back(std::move(tool));
      m.tools.emplace_back();
      continue;
    }
    auto f = split(line, '\t');
    if ((f[0] != "patch" && f[0] != "pair") || (f.size() != 5 && f.size() != 6))
      fail(ErrorCode::InvalidArgument, where() + "expected a patch or pair line");
    if (m.bug_id.empty() || m.tools.empty()) fail(ErrorCode::InvalidArgument, where() + "patch before bug_id/tool_id");
    int rank = 0;
    auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), rank);
    if (ec != std::errc() || ptr != f[2].data() + f[2].size())
      fail(ErrorCode::InvalidArgument, where() + "bad rank '" + std::string(f[2]) + "'");
    std::optional<Correctness> label;
    if (f.size() == 6) label = parse_correctness(f[5]);

    std::vector<SourcePair> pairs;
    if (f[0] == "patch") {
      auto diff = parse_unified_diff(read_file(resolve(f[3])));
      auto base_dir = resolve(f[4]);
      pairs = source_pairs_from_diff(diff, [&](const std::string& path) { return read_file(base_dir / path); });
    } else {
      SourcePair p;
      p.before = read_file(resolve(f[3]));
      p.after = read_file(resolve(f[4]));
      p.file_path = std::string(f[4]);
      pairs.push_back(std::move(p));
    }
    auto& tool = m.tools.back();
    // a pair line repeating the previous id and rank extends that patch
    if (f[0] == "pair" && !tool.empty() && tool.back().patch_id == f[1] && tool.back().original_rank == rank) {
      for (auto& p : pairs) tool.back().source_pairs.push_back(std::move(p));
      continue;
    }
    tool.push_back({std::string(f[1]), m.bug_id, tool_ids.back(), rank, std::move(pairs), label});
  }
  if (m.bug_id.empty()) fail(ErrorCode::InvalidArgument, "manifest has no bug_id");
  return m;
}

BugManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

}  // namespace fixrank

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fixrank/catalog.hpp"
#include "fixrank/category.hpp"
#include "fixrank/frequency_model.hpp"
#include "fixrank/patch_classifier.hpp"
#include "fixrank/patch_kind.hpp"

namespace fixrank {

enum class Correctness { Correct, PlausibleIncorrect };

std::string_view to_string(Correctness c);
Correctness parse_correctness(std::string_view text);

struct PatchCandidate {
  std::string patch_id;
  std::string bug_id;
  std::string tool_id;
  int original_rank = 0;  // 1-based, unique per (bug_id, tool_id)
  std::vector<SourcePair> source_pairs;
  std::optional<Correctness> correctness_label;  // never read by ranking
};

/// A candidate with its patch kind already computed.
struct ClassifiedCandidate {
  PatchCandidate candidate;
  PatchKind kind;
  bool unparseable = false;  // kind is empty because no source pair parsed
};

struct RankedPatch {
  PatchCandidate candidate;
  PatchKind kind;
  Frequency score;  // f_c(kind) for the estimated category c
  int final_rank = 0;
  BugCategory estimated_category;
  bool unparseable = false;
};

/// argmax over categories with data of the summed frequencies of `kinds`
/// (a multiset). Sums are compared exactly. Ties go to the larger total,
/// then to the earlier category in canonical order. Throws EmptyPatchSet or
/// EmptyModel.
BugCategory estimate_category(const FrequencyModel& model, const std::vector<PatchKind>& kinds);
BugCategory estimate_category_by_signature(const FrequencyModel& model, const std::vector<std::string>& signatures);

ClassifiedCandidate classify_candidate(const PatchCandidate& candidate, const Catalog& catalog = Catalog::builtin());
/// Classifies candidates across OpenMP threads; order is preserved.
std::vector<ClassifiedCandidate> classify_candidates(const std::vector<PatchCandidate>& candidates,
                                                     const Catalog& catalog = Catalog::builtin());

/// Ranks pre-classified candidates of one bug. Equal scores keep the input
/// order of the candidates, so callers pass them in tie-break order.
std::vector<RankedPatch> rank_classified(const FrequencyModel& model, const std::vector<ClassifiedCandidate>& input);

/// Classifies, then ranks by score with ties in ascending original rank.
/// Throws EmptyPatchSet, MixedBugIds, or InvalidArgument on duplicate ranks.
std::vector<RankedPatch> rank_patches(const FrequencyModel& model, const std::vector<PatchCandidate>& candidates,
                                      const Catalog& catalog = Catalog::builtin());

/// Merges per-tool candidate lists for one bug. Ties are broken by tool
/// order as given, then original rank.
std::vector<RankedPatch> rank_cumulative(const FrequencyModel& model,
                                         const std::vector<std::vector<PatchCandidate>>& candidate_sets,
                                         const Catalog& catalog = Catalog::builtin());

/// Orders one bug's classified candidates for ranking: by (tool order,
/// original rank). Validates bug ids and rank uniqueness.
std::vector<ClassifiedCandidate> tie_break_order(std::vector<std::vector<ClassifiedCandidate>> per_tool);

/// Ranks many independent bugs; each entry holds one bug's per-tool sets.
/// The parallel version ranks bugs concurrently and matches the serial one.
std::vector<std::vector<RankedPatch>> rank_bugs_serial(const FrequencyModel& model,
                                                       const std::vector<std::vector<ClassifiedCandidate>>& bugs);
std::vector<std::vector<RankedPatch>> rank_bugs(const FrequencyModel& model,
                                                const std::vector<std::vector<ClassifiedCandidate>>& bugs);

/// `bug_id<TAB>final_rank<TAB>patch_id<TAB>score<TAB>kind-signature<TAB>estimated-category`
/// lines in final-rank order, with a header line.
std::string format_ranking(const std::vector<RankedPatch>& ranking);

// --- input manifests ------------------------------------------------------

/// One bug's candidates grouped by tool, in manifest order.
struct BugManifest {
  std::string bug_id;
  std::vector<std::vector<PatchCandidate>> tools;
};

/// Manifest text:
///   bug_id: <id>
///   tool_id: <tool>          (starts a tool section; may repeat)
///   patch<TAB>id<TAB>rank<TAB>diff-path<TAB>base-dir[<TAB>label]
///   pair<TAB>id<TAB>rank<TAB>before-path<TAB>after-path[<TAB>label]
/// Several `pair` lines with the same id and rank form one multi-file patch.
/// Relative paths resolve against `base`. Sources are read eagerly.
BugManifest parse_manifest(std::string_view text, const std::filesystem::path& base);
BugManifest load_manifest(const std::filesystem::path& path);

}  // namespace fixrank

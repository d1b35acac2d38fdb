#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fixrank/catalog.hpp"
#include "fixrank/patch_kind.hpp"
#include "fixrank/syntax_tree.hpp"
#include "fixrank/tree_diff.hpp"
#include "fixrank/unified_diff.hpp"

namespace fixrank {

/// Before/after contents of one file touched by a patch. An empty side
/// stands for an added or deleted file.
struct SourcePair {
  std::string before;
  std::string after;
  std::string language = "java";
  std::string file_path;
};

enum class ConditionChange { Strengthen, Weaken, Other };

std::string_view to_string(ConditionChange change);

/// Structural comparison of two boolean expressions: adding a top-level
/// conjunct or dropping a disjunct strengthens, the converse weakens.
/// Operands are compared as multisets, so reordering is not a change.
ConditionChange analyze_condition_change(const SyntaxTree& before, NodeId before_expr, const SyntaxTree& after,
                                         NodeId after_expr);

struct ClassifierOptions {
  /// An added/removed `if` whose condition compares against null is reported
  /// as null_check.{add,remove} instead of conditional.{add,remove}. When
  /// false both are reported.
  bool collapse_null_check = true;
};

/// Maps each edit to catalog combinations. Inserted and deleted subtrees are
/// classified by their root only. Combinations absent from `catalog` are
/// dropped.
PatchKind detect_feature_modifications(const SyntaxTree& before, const SyntaxTree& after, const EditScript& script,
                                       const Catalog& catalog, const ClassifierOptions& options = {});

struct PatchClassification {
  PatchKind kind;
  std::size_t parsed_pairs = 0;
  std::vector<std::string> diagnostics;  // one per pair that failed to parse

  bool parsed() const { return parsed_pairs > 0; }
};

/// Union of per-file kinds over every pair that parses on both sides. Never
/// throws on parse errors; see PatchClassification::parsed().
PatchClassification classify_patch_detailed(const std::vector<SourcePair>& pairs,
                                            const Catalog& catalog = Catalog::builtin(),
                                            const ClassifierOptions& options = {});

/// As classify_patch_detailed, but throws Error(Unparseable) when no pair parses.
PatchKind classify_patch(const std::vector<SourcePair>& pairs, const Catalog& catalog = Catalog::builtin(),
                         const ClassifierOptions& options = {});

/// Classifies independent patches. The parallel variant distributes patches
/// over OpenMP threads; results are identical to the serial reference.
std::vector<PatchClassification> classify_batch_serial(const std::vector<std::vector<SourcePair>>& patches,
                                                       const Catalog& catalog = Catalog::builtin(),
                                                       const ClassifierOptions& options = {});
std::vector<PatchClassification> classify_batch(const std::vector<std::vector<SourcePair>>& patches,
                                                const Catalog& catalog = Catalog::builtin(),
                                                const ClassifierOptions& options = {});

/// Builds source pairs for the object-language files of a diff. `read_base`
/// returns the pre-patch content of a path (unused for added files).
std::vector<SourcePair> source_pairs_from_diff(const UnifiedDiff& diff,
                                               const std::function<std::string(const std::string&)>& read_base,
                                               const SourceFilter& filter = {});

}  // namespace fixrank

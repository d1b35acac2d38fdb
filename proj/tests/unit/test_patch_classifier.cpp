#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "fixrank/catalog.hpp"
#include "fixrank/error.hpp"
#include "fixrank/java_parser.hpp"
#include "fixrank/patch_classifier.hpp"
#include "fixrank/text.hpp"
#include "fixrank/unified_diff.hpp"
#include "synthetic.hpp"

using namespace fixrank;
namespace fs = std::filesystem;

namespace {

struct Golden {
  std::string name;
  SourcePair pair;
  std::string expected;
};

std::vector<Golden> load_goldens() {
  std::vector<Golden> out;
  for (const auto& entry : fs::directory_iterator(std::string(FIXRANK_SOURCE_DIR) + "/tests/fixtures/kinds")) {
    Golden g;
    g.name = entry.path().filename().string();
    g.pair.before = read_file(entry.path() / "before.src");
    g.pair.after = read_file(entry.path() / "after.src");
    g.pair.file_path = "sample/Sample.java";
    auto expected = read_file(entry.path() / "expected.kind");
    g.expected = std::string(trim(expected));
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const Golden& a, const Golden& b) { return a.name < b.name; });
  return out;
}

// add <-> remove; strengthen <-> weaken; everything else unchanged
std::string mirror(const std::string& id) {
  auto f = *FeatureModification::parse(id);
  if (f.modification == Modification::Add)
    f.modification = Modification::Remove;
  else if (f.modification == Modification::Remove)
    f.modification = Modification::Add;
  auto swap_suffix = [&](const std::string& a, const std::string& b) {
    if (ends_with(f.qualifier, a)) f.qualifier = f.qualifier.substr(0, f.qualifier.size() - a.size()) + b;
    else if (ends_with(f.qualifier, b)) f.qualifier = f.qualifier.substr(0, f.qualifier.size() - b.size()) + a;
  };
  swap_suffix("strengthen", "weaken");
  return f.id();
}

PatchKind mirror(const PatchKind& k) {
  std::vector<std::string> ids;
  for (const auto& m : k.members()) ids.push_back(mirror(m));
  return PatchKind(ids);
}

}  // namespace

TEST(PatchClassifier, GoldenKinds) {
  auto goldens = load_goldens();
  ASSERT_GE(goldens.size(), 80u);
  for (const auto& g : goldens) {
    auto result = classify_patch_detailed({g.pair});
    EXPECT_TRUE(result.parsed()) << g.name;
    EXPECT_EQ(result.kind.signature(Catalog::builtin()), g.expected) << g.name;
  }
}

TEST(PatchClassifier, GoldensCoverTheWholeCatalog) {
  std::set<std::string> seen;
  for (const auto& g : load_goldens()) {
    auto kind = PatchKind::parse(g.expected, Catalog::builtin());
    seen.insert(kind.members().begin(), kind.members().end());
  }
  for (const auto& e : Catalog::builtin().entries()) EXPECT_TRUE(seen.count(e.id())) << "no golden for " << e.id();
}

TEST(PatchClassifier, GuardStrengtheningWithNullConjunct) {
  auto goldens = load_goldens();
  auto it = std::find_if(goldens.begin(), goldens.end(), [](const Golden& g) { return g.name == "guard_strengthen_null_conjunct"; });
  ASSERT_NE(it, goldens.end());
  EXPECT_EQ(classify_patch({it->pair}).signature(Catalog::builtin()), "conditional.modify.condition_strengthen");
}

TEST(PatchClassifier, SwappingSidesMirrorsTheKind) {
  for (const auto& g : load_goldens()) {
    SourcePair reversed{g.pair.after, g.pair.before, "java", g.pair.file_path};
    auto forward = classify_patch({g.pair});
    EXPECT_EQ(classify_patch({reversed}), mirror(forward)) << g.name;
  }
}

TEST(PatchClassifier, NoChangeIsTheEmptyKind) {
  std::mt19937_64 rng(1);
  auto pair = fixture::make_java_patch(fixture::dominant_templates().front(), rng);
  pair.after = pair.before;
  EXPECT_TRUE(classify_patch({pair}).empty());
}

TEST(PatchClassifier, Deterministic) {
  auto goldens = load_goldens();
  for (int round = 0; round < 3; ++round)
    for (const auto& g : goldens)
      EXPECT_EQ(classify_patch({g.pair}).signature(), g.expected) << g.name;
}

TEST(PatchClassifier, SyntheticTemplatesClassifyAsLabeled) {
  std::mt19937_64 rng(21);
  auto templates = fixture::dominant_templates();
  for (const auto& t : fixture::background_templates()) templates.push_back(t);
  for (int round = 0; round < 20; ++round)
    for (const auto& t : templates)
      EXPECT_EQ(classify_patch({fixture::make_java_patch(t, rng)}).signature(Catalog::builtin()),
                t.expected_signature)
          << t.name;
}

TEST(PatchClassifier, DominantAndBackgroundKindsAreDisjoint) {
  std::set<std::string> dominant;
  for (const auto& t : fixture::dominant_templates()) dominant.insert(t.expected_signature);
  EXPECT_EQ(dominant.size(), fixture::dominant_templates().size());
  for (const auto& t : fixture::background_templates()) EXPECT_FALSE(dominant.count(t.expected_signature)) << t.name;
}

TEST(PatchClassifier, MultiFilePatchIsTheUnion) {
  auto goldens = load_goldens();
  auto find = [&](const std::string& name) {
    return std::find_if(goldens.begin(), goldens.end(), [&](const Golden& g) { return g.name == name; })->pair;
  };
  auto kind = classify_patch({find("null_check_add"), find("loop_update")});
  EXPECT_EQ(kind.signature(Catalog::builtin()), "loop.modify.update+null_check.add");
}

TEST(PatchClassifier, UnparseablePairs) {
  SourcePair bad{"class A { void m( {", "class A { void m() {} }"};
  auto detailed = classify_patch_detailed({bad});
  EXPECT_FALSE(detailed.parsed());
  EXPECT_EQ(detailed.diagnostics.size(), 1u);
  EXPECT_TRUE(detailed.kind.empty());
  try {
    classify_patch({bad});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unparseable);
  }
  // one good pair is enough
  auto goldens = load_goldens();
  auto mixed = classify_patch_detailed({bad, goldens.front().pair});
  EXPECT_TRUE(mixed.parsed());
  EXPECT_EQ(mixed.kind.signature(), goldens.front().expected);
}

TEST(PatchClassifier, OtherLanguagesRejected) {
  SourcePair p{"int main() {}", "int main() { return 0; }", "c", "main.c"};
  try {
    classify_patch({p});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(PatchClassifier, NullCheckCollapseOption) {
  auto goldens = load_goldens();
  auto g = std::find_if(goldens.begin(), goldens.end(), [](const Golden& x) { return x.name == "null_check_add"; });
  ClassifierOptions keep;
  keep.collapse_null_check = false;
  EXPECT_EQ(classify_patch({g->pair}, Catalog::builtin(), keep).signature(), "conditional.add+null_check.add");
}

TEST(PatchClassifier, KindsOutsideTheCatalogAreDropped) {
  auto goldens = load_goldens();
  auto g = std::find_if(goldens.begin(), goldens.end(), [](const Golden& x) { return x.name == "wrap_in_conditional"; });
  std::vector<FeatureModification> entries;
  for (const auto& e : Catalog::builtin().entries())
    if (e.feature != "block_scope") entries.push_back(e);
  Catalog reduced("0.9.0", entries);
  EXPECT_EQ(classify_patch({g->pair}, reduced).signature(reduced), "conditional.add");
}

TEST(PatchClassifier, BatchMatchesSerial) {
  std::vector<std::vector<SourcePair>> batch;
  for (const auto& g : load_goldens()) batch.push_back({g.pair});
  batch.push_back({SourcePair{"class {", "class {"}});
  auto serial = classify_batch_serial(batch);
  auto parallel = classify_batch(batch);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].kind, parallel[i].kind);
    EXPECT_EQ(serial[i].parsed_pairs, parallel[i].parsed_pairs);
  }
}

TEST(ConditionChange, ConjunctAndDisjunctSets) {
  auto check = [](const std::string& a, const std::string& b) {
    auto ta = parse_java("x = " + a + ";", ParseMode::Statements);
    auto tb = parse_java("x = " + b + ";", ParseMode::Statements);
    auto rhs = [](const SyntaxTree& t) {
      for (NodeId i = 0; i < static_cast<NodeId>(t.size()); ++i)
        if (t.kind(i) == NodeKind::Assign) return t.node(i).children[1];
      return kNoNode;
    };
    return analyze_condition_change(ta, rhs(ta), tb, rhs(tb));
  };
  EXPECT_EQ(check("a", "a && b"), ConditionChange::Strengthen);
  EXPECT_EQ(check("a && b", "b && a && c"), ConditionChange::Strengthen);
  EXPECT_EQ(check("a || b", "a"), ConditionChange::Strengthen);
  EXPECT_EQ(check("a && b", "a"), ConditionChange::Weaken);
  EXPECT_EQ(check("a", "a || b"), ConditionChange::Weaken);
  EXPECT_EQ(check("a > 0", "a >= 0"), ConditionChange::Other);
  EXPECT_EQ(check("a && b", "a && c"), ConditionChange::Other);
  EXPECT_EQ(to_string(ConditionChange::Strengthen), "strengthen");
}

TEST(SourcePairs, FromDiffAgainstBaseFiles) {
  std::string base = "class A {\n  void m() {\n    a();\n  }\n}\n";
  std::string text =
      "--- a/src/A.java\n+++ b/src/A.java\n@@ -3,1 +3,2 @@\n     a();\n+    b();\n"
      "--- a/docs/x.md\n+++ b/docs/x.md\n@@ -1 +1 @@\n-x\n+y\n";
  auto pairs = source_pairs_from_diff(parse_unified_diff(text), [&](const std::string& path) {
    EXPECT_EQ(path, "src/A.java");
    return base;
  });
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].before, base);
  EXPECT_EQ(pairs[0].after, "class A {\n  void m() {\n    a();\n    b();\n  }\n}\n");
  EXPECT_EQ(classify_patch(pairs).signature(), "method_call.add");
}

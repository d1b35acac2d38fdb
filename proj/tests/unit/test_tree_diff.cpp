#include <gtest/gtest.h>

#include <random>

#include "fixrank/error.hpp"
#include "fixrank/java_parser.hpp"
#include "fixrank/tree_diff.hpp"
#include "synthetic.hpp"

using namespace fixrank;

namespace {

void expect_same_tree(const SyntaxTree& a, const SyntaxTree& b) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_TRUE(a.isomorphic(a.root(), b, b.root())) << a.render() << "\n" << b.render();
}

std::vector<fixture::EditTemplate> all_templates() {
  auto out = fixture::dominant_templates();
  for (const auto& t : fixture::background_templates()) out.push_back(t);
  return out;
}

}  // namespace

TEST(JavaParser, CompilationUnitShape) {
  auto t = parse_java("package p;\nimport java.util.List;\nclass A { int f = 1; void m() { if (f > 0) { f--; } } }");
  EXPECT_EQ(t.kind(t.root()), NodeKind::CompilationUnit);
  EXPECT_EQ(t.render(),
            "(CompilationUnit (Package:p) (Import:java.util.List) (ClassDecl:A (Modifiers:class) (ClassBody (FieldDecl "
            "(Modifiers) (TypeRef:int) (Declarator:f (Initializer (Literal:1)))) (MethodDecl:m (Modifiers) "
            "(TypeRef:void) (Parameters) (Block (If (Condition (Binary:> (Name:f) (Literal:0))) (Then (Block "
            "(ExprStmt (Unary:post-- (Name:f)))))))))))");
}

TEST(JavaParser, StatementFragmentsAndMembers) {
  auto stmts = parse_java("x = y + 1; return x;", ParseMode::Statements);
  EXPECT_GE(stmts.size(), 5u);
  auto members = parse_java("int f; void g() {}", ParseMode::ClassBody);
  EXPECT_GE(members.size(), 3u);
  EXPECT_NO_THROW(parse_java("x = y + 1;"));
}

TEST(JavaParser, RejectsGarbage) {
  try {
    parse_java("class { void (");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unparseable);
  }
}

TEST(JavaParser, DerivedAttributesAreConsistent) {
  std::mt19937_64 rng(1);
  auto pair = fixture::make_java_patch(fixture::background_templates().front(), rng);
  auto t = parse_java(pair.before);
  for (NodeId i = 0; i < static_cast<NodeId>(t.size()); ++i) {
    int size = 1, height = 1;
    for (auto c : t.node(i).children) {
      EXPECT_EQ(t.parent(c), i);
      size += t.node(c).size;
      height = std::max(height, t.node(c).height + 1);
    }
    EXPECT_EQ(t.node(i).size, size);
    EXPECT_EQ(t.node(i).height, height);
  }
}

TEST(TreeDiff, IdenticalTreesNeedNoEdits) {
  std::mt19937_64 rng(2);
  auto pair = fixture::make_java_patch(fixture::dominant_templates().front(), rng);
  auto t = parse_java(pair.before);
  auto script = diff_trees(t, t);
  EXPECT_TRUE(script.empty());
  EXPECT_EQ(script.mapping.size(), t.size());
}

TEST(TreeDiff, ApplyingTheScriptYieldsTheAfterTree) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 10; ++round) {
    for (const auto& tmpl : all_templates()) {
      auto pair = fixture::make_java_patch(tmpl, rng);
      auto before = parse_java(pair.before);
      auto after = parse_java(pair.after);
      auto script = diff_trees(before, after);
      EXPECT_FALSE(script.empty()) << tmpl.name;
      expect_same_tree(apply_edit_script(before, script), after);
    }
  }
}

TEST(TreeDiff, ApplyHoldsAcrossUnrelatedSources) {
  std::mt19937_64 rng(4);
  auto templates = all_templates();
  for (int trial = 0; trial < 40; ++trial) {
    auto a = fixture::make_java_patch(templates[trial % templates.size()], rng);
    auto b = fixture::make_java_patch(templates[(trial * 7 + 3) % templates.size()], rng);
    auto before = parse_java(a.before);
    auto after = parse_java(b.after);
    expect_same_tree(apply_edit_script(before, diff_trees(before, after)), after);
  }
}

TEST(TreeDiff, MappingIsOneToOneAndKindPreserving) {
  std::mt19937_64 rng(12);
  for (const auto& tmpl : all_templates()) {
    auto pair = fixture::make_java_patch(tmpl, rng);
    auto before = parse_java(pair.before);
    auto after = parse_java(pair.after);
    auto m = match_trees(before, after);
    for (NodeId i = 0; i < static_cast<NodeId>(before.size()); ++i) {
      auto j = m.after_of(i);
      if (j == kNoNode) continue;
      EXPECT_EQ(m.before_of(j), i);
      EXPECT_EQ(before.kind(i), after.kind(j));
    }
  }
}

#include <gtest/gtest.h>

#include <random>

#include "fixrank/error.hpp"
#include "fixrank/unified_diff.hpp"

using namespace fixrank;

namespace {

std::string file_diff(const std::string& path, const std::string& hunk_header, const std::string& body) {
  return "diff --git a/" + path + " b/" + path + "\n--- a/" + path + "\n+++ b/" + path + "\n" + hunk_header + "\n" +
         body;
}

// Independent count: walk the +/- markers, pairing each run of removals with
// the run of additions immediately after it.
int naive_count(const std::string& markers) {
  int total = 0;
  std::size_t i = 0;
  while (i < markers.size()) {
    if (markers[i] == ' ') {
      ++i;
      continue;
    }
    int removed = 0, added = 0;
    while (i < markers.size() && markers[i] == '-') ++removed, ++i;
    while (i < markers.size() && markers[i] == '+') ++added, ++i;
    total += std::max(removed, added);
  }
  return total;
}

std::string hunk_from_markers(const std::string& markers) {
  int old_count = 0, new_count = 0;
  std::string body;
  int n = 0;
  for (char m : markers) {
    body += m;
    body += "line" + std::to_string(n++) + ";\n";
    if (m != '+') ++old_count;
    if (m != '-') ++new_count;
  }
  return file_diff("src/A.java", "@@ -1," + std::to_string(old_count) + " +1," + std::to_string(new_count) + " @@",
                   body);
}

}  // namespace

TEST(UnifiedDiff, ParsesFilesAndHunks) {
  auto text = file_diff("src/A.java", "@@ -3,3 +3,4 @@ class A {", " a();\n-b();\n+c();\n+d();\n e();\n");
  auto diff = parse_unified_diff(text);
  ASSERT_EQ(diff.files.size(), 1u);
  const auto& f = diff.files[0];
  EXPECT_EQ(f.old_path, "src/A.java");
  EXPECT_EQ(f.new_path, "src/A.java");
  ASSERT_EQ(f.hunks.size(), 1u);
  EXPECT_EQ(f.hunks[0].old_start, 3);
  EXPECT_EQ(f.hunks[0].new_count, 4);
  ASSERT_EQ(f.hunks[0].lines.size(), 5u);
  EXPECT_EQ(f.hunks[0].lines[1].op, LineOp::Remove);
  EXPECT_EQ(f.hunks[0].lines[2].text, "c();");
  EXPECT_EQ(to_text(diff), text);
}

TEST(UnifiedDiff, AddedAndDeletedFiles) {
  std::string text =
      "diff --git a/N.java b/N.java\nnew file mode 100644\n--- /dev/null\n+++ b/N.java\n@@ -0,0 +1,2 @@\n+class N {\n+}\n"
      "diff --git a/O.java b/O.java\ndeleted file mode 100644\n--- a/O.java\n+++ /dev/null\n@@ -1 +0,0 @@\n-class O {}\n";
  auto diff = parse_unified_diff(text);
  ASSERT_EQ(diff.files.size(), 2u);
  EXPECT_TRUE(diff.files[0].is_added());
  EXPECT_EQ(diff.files[0].path(), "N.java");
  EXPECT_TRUE(diff.files[1].is_deleted());
  EXPECT_EQ(diff.files[1].path(), "O.java");
}

TEST(UnifiedDiff, MalformedInputRejected) {
  auto expect_malformed = [](const std::string& text) {
    try {
      parse_unified_diff(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedDiff);
    }
  };
  expect_malformed(file_diff("A.java", "@@ -1,2 +1,2 @@", "-a\n+b\n"));  // short hunk
  expect_malformed(file_diff("A.java", "@@ -x +1 @@", "+b\n"));
  expect_malformed("--- a/A.java\n+++ b/A.java\n@@ -1 +1 @@\n*a\n");
}

TEST(UnifiedDiff, ApplyReproducesNewContent) {
  std::string base = "a\nb\nc\nd\n";
  auto diff = parse_unified_diff(file_diff("A.java", "@@ -2,2 +2,3 @@", "-b\n+B\n+B2\n c\n"));
  EXPECT_EQ(apply_file_diff(base, diff.files[0]), "a\nB\nB2\nc\nd\n");
}

TEST(ChangedLineCount, WorkedExamples) {
  SourceFilter filter;
  EXPECT_EQ(changed_line_count(parse_unified_diff(hunk_from_markers(" -+ ")), filter), 1);
  EXPECT_EQ(changed_line_count(parse_unified_diff(hunk_from_markers(" +++ ")), filter), 3);
  EXPECT_EQ(changed_line_count(parse_unified_diff(hunk_from_markers(" --+++ ")), filter), 3);
}

TEST(ChangedLineCount, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(3);
  const char ops[] = {' ', '+', '-'};
  for (int trial = 0; trial < 1000; ++trial) {
    std::string markers;
    int n = std::uniform_int_distribution<int>(1, 25)(rng);
    for (int i = 0; i < n; ++i) markers += ops[std::uniform_int_distribution<int>(0, 2)(rng)];
    auto diff = parse_unified_diff(hunk_from_markers(markers));
    EXPECT_EQ(changed_line_count(diff, SourceFilter{}), naive_count(markers)) << markers;
  }
}

TEST(ChangedLineCount, ExcludedAndNonSourceFilesCountZero) {
  auto text = file_diff("docs/guide.md", "@@ -1 +1 @@", "-a\n+b\n") +
              file_diff("src/test/java/ATest.java", "@@ -1 +1 @@", "-a\n+b\n") +
              file_diff("src/main/java/A.java", "@@ -1 +1,2 @@", "-a\n+b\n+c\n");
  EXPECT_EQ(changed_line_count(parse_unified_diff(text), SourceFilter{}), 2);
}

TEST(SourceFilter, ExtensionsAndExclusions) {
  SourceFilter f;
  EXPECT_TRUE(f.is_source("src/main/java/A.java"));
  EXPECT_TRUE(f.is_source("A.java"));
  EXPECT_FALSE(f.is_source("README.md"));
  EXPECT_FALSE(f.is_source("test/A.java"));
  EXPECT_FALSE(f.is_source("module/tests/B.java"));
  EXPECT_FALSE(f.is_source("src/FooTest.java"));
  EXPECT_FALSE(f.is_source("docs/Example.java"));
}

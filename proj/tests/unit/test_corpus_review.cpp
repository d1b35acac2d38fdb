#include <gtest/gtest.h>

#include "fixrank/catalog.hpp"
#include "fixrank/corpus.hpp"
#include "fixrank/error.hpp"
#include "fixrank/review.hpp"
#include "fixrank/text.hpp"
#include "error_code.hpp"
#include "temp_dir.hpp"

using namespace fixrank;
using fixrank::fixture::TempDir;
using fixrank::fixture::error_code_of;

namespace {

CorpusRecord record(const std::string& id, const std::string& category, ReviewStatus status = ReviewStatus::Pending) {
  CorpusRecord r;
  r.triple_id = id;
  r.repo_id = "demo";
  r.pre_commit = std::string(40, '1');
  r.post_commit = std::string(40, '2');
  r.category = BugCategory(category);
  r.status = status;
  r.catalog_version = Catalog::builtin().version();
  r.kind = PatchKind{"null_check.add", "method_call.modify.callee"};
  r.message = "Fix NPE in " + id + "\n\nsecond paragraph: with colon\n";
  r.buggy_source = {{"src/A.java", "class A {\n}\n"}, {"src/B.java", ""}};
  r.diff = "--- a/src/A.java\n+++ b/src/A.java\n@@ -1,2 +1,3 @@\n class A {\n+  int x;\n }\n";
  return r;
}

void write_verdicts(const std::filesystem::path& path, const std::string& body) { write_file(path, body); }

}  // namespace

TEST(CorpusRecord, SerializeRoundTrip) {
  auto r = record("demo-aaaa", "null_pointer", ReviewStatus::Accepted);
  EXPECT_EQ(parse_record(serialize_record(r)), r);
  r.kind = PatchKind();
  r.message.clear();
  r.buggy_source.clear();
  r.diff = "";
  EXPECT_EQ(parse_record(serialize_record(r)), r);
}

TEST(CorpusRecord, MalformedTextRejected) {
  auto text = serialize_record(record("x", "logic"));
  EXPECT_EQ(error_code_of([&] { parse_record(text.substr(0, 30)); }), ErrorCode::IOFailure);
  EXPECT_EQ(error_code_of([&] { parse_record("fixrank-record: 9\n"); }), ErrorCode::IOFailure);
}

TEST(Corpus, StoreLoadAndOrder) {
  TempDir dir;
  Corpus corpus(dir.path());
  corpus.store(record("b-2", "logic"));
  corpus.store(record("a-1", "overflow"));
  EXPECT_TRUE(corpus.contains("a-1"));
  EXPECT_FALSE(corpus.contains("c-3"));
  auto all = corpus.load_all();
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].triple_id, "a-1");
  EXPECT_EQ(all[1], record("b-2", "logic"));
  EXPECT_EQ(error_code_of([&] { corpus.load("c-3"); }), ErrorCode::UnknownTripleId);
  EXPECT_TRUE(Corpus(dir / "missing").load_all().empty());
}

TEST(Corpus, TripleIdsAreFileSafe) {
  EXPECT_EQ(make_triple_id("commons-lang", "0123456789abcdef0123"), "commons-lang-0123456789ab");
  EXPECT_EQ(make_triple_id("a/b c", "ffffffffffffffff"), "a_b_c-ffffffffffff");
}

TEST(Corpus, TrainingVisibility) {
  std::vector<CorpusRecord> rs{record("a", "logic", ReviewStatus::Accepted), record("b", "logic", ReviewStatus::Pending),
                               record("c", "logic", ReviewStatus::Rejected), record("d", "logic", ReviewStatus::Accepted)};
  EXPECT_EQ(training_records(rs, false).size(), 2u);
  EXPECT_EQ(training_records(rs, true).size(), 3u);
}

TEST(Review, ExportEmptyQueueIsHeaderOnly) {
  TempDir dir;
  Corpus corpus(dir / "corpus");
  corpus.store(record("a", "logic", ReviewStatus::Accepted));
  EXPECT_EQ(export_review_queue(corpus, dir / "queue.txt"), 0u);
  auto text = read_file(dir / "queue.txt");
  EXPECT_TRUE(parse_review_file(text).empty());
  EXPECT_EQ(text.find("id:"), std::string::npos);
}

TEST(Review, ExportListsPendingInCorpusOrder) {
  TempDir dir;
  Corpus corpus(dir / "corpus");
  for (auto id : {"c", "a", "b"}) corpus.store(record(id, "null_pointer"));
  EXPECT_EQ(export_review_queue(corpus, dir / "queue.txt"), 3u);
  auto parsed = parse_review_file(read_file(dir / "queue.txt"));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[0].triple_id, "a");
  EXPECT_EQ(parsed[2].triple_id, "c");
  EXPECT_EQ(parsed[1].proposed_category.name(), "null_pointer");
  EXPECT_TRUE(parsed[1].reviewer_verdicts.empty());
}

TEST(Review, VerdictsDecideStatus) {
  auto status = [](std::vector<Verdict> v) { return ReviewRecord{"x", BugCategory("logic"), std::move(v)}.final_status(); };
  EXPECT_EQ(status({{"r1", true}, {"r2", true}}), ReviewStatus::Accepted);
  EXPECT_EQ(status({{"r1", true}, {"r2", false}}), ReviewStatus::Rejected);
  EXPECT_EQ(status({{"r1", true}}), ReviewStatus::Pending);
  EXPECT_EQ(status({{"r1", false}}), ReviewStatus::Rejected);
  EXPECT_EQ(status({}), ReviewStatus::Pending);
}

TEST(Review, ImportThenReexportOnlyPending) {
  TempDir dir;
  Corpus corpus(dir / "corpus");
  for (auto id : {"a", "b", "c", "d"}) corpus.store(record(id, "logic"));
  export_review_queue(corpus, dir / "queue.txt");
  auto text = read_file(dir / "queue.txt");
  auto fill = [&](const std::string& id, const std::string& r1, const std::string& r2) {
    auto at = text.find("id: " + id + "\n");
    auto v1 = text.find("verdict[reviewer1]:", at);
    text.insert(v1 + 19, " " + r1);
    auto v2 = text.find("verdict[reviewer2]:", at);
    text.insert(v2 + 19, " " + r2);
  };
  fill("a", "accept", "accept");
  fill("b", "accept", "reject");
  fill("c", "accept", "");
  write_verdicts(dir / "queue.txt", text);

  auto summary = import_review_verdicts(corpus, dir / "queue.txt");
  EXPECT_EQ(summary.accepted, 1u);
  EXPECT_EQ(summary.rejected, 1u);
  EXPECT_EQ(summary.pending, 2u);
  EXPECT_EQ(corpus.load("a").status, ReviewStatus::Accepted);
  EXPECT_EQ(corpus.load("b").status, ReviewStatus::Rejected);
  EXPECT_EQ(corpus.load("c").status, ReviewStatus::Pending);

  EXPECT_EQ(export_review_queue(corpus, dir / "again.txt"), 2u);
  auto again = parse_review_file(read_file(dir / "again.txt"));
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].triple_id, "c");
  EXPECT_EQ(again[1].triple_id, "d");
  EXPECT_EQ(training_records(corpus.load_all(), false).size(), 1u);
}

TEST(Review, MalformedFilesRejectedBeforeAnyWrite) {
  TempDir dir;
  Corpus corpus(dir / "corpus");
  corpus.store(record("a", "logic"));
  corpus.store(record("b", "logic"));
  auto import = [&](const std::string& body) {
    write_verdicts(dir / "v.txt", body);
    return error_code_of([&] { import_review_verdicts(corpus, dir / "v.txt"); });
  };
  EXPECT_EQ(import("id: a\nverdict[r1]: accept\nverdict[r1]: accept\n"), ErrorCode::MalformedReviewFile);
  EXPECT_EQ(import("id: a\nverdict[r1]: maybe\n"), ErrorCode::MalformedReviewFile);
  EXPECT_EQ(import("id: a\nmood: fine\n"), ErrorCode::MalformedReviewFile);
  EXPECT_EQ(import("category: logic\n"), ErrorCode::MalformedReviewFile);
  EXPECT_EQ(import("id: a\ncategory: overflow\nverdict[r1]: accept\nverdict[r2]: accept\n"),
            ErrorCode::MalformedReviewFile);
  EXPECT_EQ(import("id: a\nverdict[r1]: accept\nverdict[r2]: accept\n\nid: zzz\nverdict[r1]: accept\n"),
            ErrorCode::UnknownTripleId);
  EXPECT_EQ(corpus.load("a").status, ReviewStatus::Pending);
}

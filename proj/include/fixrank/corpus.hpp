#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fixrank/category.hpp"
#include "fixrank/patch_kind.hpp"

namespace fixrank {

enum class ReviewStatus { Pending, Accepted, Rejected };

std::string_view to_string(ReviewStatus status);
ReviewStatus parse_review_status(std::string_view text);

struct SourceFile {
  std::string path;
  std::string content;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

/// One classified training triple as stored on disk.
struct CorpusRecord {
  std::string triple_id;
  std::string repo_id;
  std::string pre_commit;
  std::string post_commit;
  BugCategory category;
  ReviewStatus status = ReviewStatus::Pending;
  std::string catalog_version;
  PatchKind kind;
  std::string message;
  std::vector<SourceFile> buggy_source;
  std::string diff;  // unified diff text

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

/// Serialized form: a `key: value` header, then length-prefixed message and
/// source sections, then the diff up to end of file.
std::string serialize_record(const CorpusRecord& record);
CorpusRecord parse_record(std::string_view text);

/// A directory holding one `records/<triple_id>.rec` file per triple.
class Corpus {
 public:
  explicit Corpus(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path record_path(const std::string& triple_id) const;

  /// All records sorted by triple id. A missing directory is an empty corpus.
  std::vector<CorpusRecord> load_all() const;
  CorpusRecord load(const std::string& triple_id) const;
  bool contains(const std::string& triple_id) const;
  void store(const CorpusRecord& record) const;

 private:
  std::filesystem::path root_;
};

/// Records visible to training: accepted ones, or every non-rejected one when
/// review is skipped.
std::vector<CorpusRecord> training_records(const std::vector<CorpusRecord>& records, bool no_review);

/// Filesystem-safe id derived from repository and post-commit.
std::string make_triple_id(std::string_view repo_id, std::string_view post_commit);

}  // namespace fixrank

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fixrank/bug_classifier.hpp"
#include "fixrank/catalog.hpp"
#include "fixrank/corpus.hpp"
#include "fixrank/error.hpp"
#include "fixrank/unified_diff.hpp"

namespace fixrank {

/// Read-only view of a local git repository through the git executable.
class GitRepository {
 public:
  /// Throws Error(RepoUnreadable) unless `path` is a readable work tree or
  /// bare repository.
  explicit GitRepository(std::filesystem::path path);

  const std::filesystem::path& path() const noexcept { return path_; }

  /// Resolves a branch or revision to a commit id. Throws BranchMissing.
  std::string resolve(const std::string& branch) const;
  /// First-parent chain ending at `branch`, oldest first.
  std::vector<std::string> first_parent_chain(const std::string& branch) const;
  std::vector<std::string> parents(const std::string& commit) const;
  std::string message(const std::string& commit) const;
  std::string diff(const std::string& from, const std::string& to) const;
  std::string show_file(const std::string& commit, const std::string& file_path) const;

 private:
  std::filesystem::path path_;

  std::string git(const std::vector<std::string>& args, ErrorCode on_error = ErrorCode::RepoUnreadable) const;
};

/// One candidate training point: the post-commit message, the diff between
/// the commit pair, and the pre-commit content of the touched source files.
struct CommitTriple {
  std::string repo_id;
  std::string pre_commit;
  std::string post_commit;
  std::string message;
  std::string diff_text;
  UnifiedDiff diff;
  std::vector<SourceFile> buggy_source;

  std::string id() const { return make_triple_id(repo_id, post_commit); }
};

struct MinerConfig {
  int max_changed_lines = 5;
  /// Regexes any of which marks a bug-fixing message. Empty means the
  /// builtin category patterns.
  std::vector<std::string> bugfix_keywords;
  std::string branch = "HEAD";
  std::vector<std::string> object_language_extensions{".java"};
  std::vector<std::string> exclude_paths = SourceFilter{}.exclude_globs;

  SourceFilter source_filter() const { return {object_language_extensions, exclude_paths}; }
  /// Throws Error(InvalidArgument) when max_changed_lines < 1.
  void validate() const;
};

struct WalkStats {
  std::size_t pairs = 0;
  std::size_t merges_skipped = 0;
};

/// Emits one triple per consecutive first-parent pair, oldest first, before
/// filtering. Pairs whose newer commit is a merge are skipped and counted.
WalkStats walk_commit_pairs(const GitRepository& repo, const MinerConfig& config, const std::string& repo_id,
                            const std::function<void(CommitTriple)>& sink);

std::vector<CommitTriple> collect_commit_pairs(const GitRepository& repo, const MinerConfig& config,
                                               const std::string& repo_id, WalkStats* stats = nullptr);

/// Small enough, looks like a bug fix and touches object-language source.
bool filter_triple(const CommitTriple& triple, const MinerConfig& config);

struct MineSummary {
  WalkStats walk;
  std::size_t accepted = 0;       // passed filter_triple
  std::size_t uncategorized = 0;  // passed the filter but no category pattern matched
  std::size_t unparseable = 0;    // no touched source file parsed
  std::size_t stored = 0;
  std::size_t already_present = 0;

  MineSummary& operator+=(const MineSummary& other);
};

/// Mines one repository into the corpus. Stored records are pending review;
/// existing records are left untouched.
MineSummary mine_repository(const GitRepository& repo, const std::string& repo_id, const MinerConfig& config,
                            const BugClassifier& classifier, const Catalog& catalog, const Corpus& corpus);

struct RepositorySpec {
  std::string url;
  std::string branch;
};

/// `url<TAB>branch` per line; '#' comments and blank lines ignored.
std::vector<RepositorySpec> parse_repository_manifest(std::string_view text);

/// Returns a local path for `spec`: existing directories are used in place,
/// anything else is cloned under `cache_dir`.
std::filesystem::path materialize_repository(const RepositorySpec& spec, const std::filesystem::path& cache_dir);

/// Repository id used in triple ids: the last path component without `.git`.
std::string repository_id(std::string_view url);

}  // namespace fixrank

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fixrank {

enum class LineOp { Context, Add, Remove };

struct DiffLine {
  LineOp op;
  std::string text;
  bool no_newline = false;  // followed by "\ No newline at end of file"
};

struct Hunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  std::string section;  // text after the closing @@, usually the enclosing declaration
  std::vector<DiffLine> lines;

  bool old_missing_newline() const;
  bool new_missing_newline() const;
};

struct FileDiff {
  std::string old_path;  // empty for added files
  std::string new_path;  // empty for deleted files
  std::vector<Hunk> hunks;
  bool binary = false;

  /// The path the change is reported under (new path unless deleted).
  const std::string& path() const { return new_path.empty() ? old_path : new_path; }
  bool is_added() const { return old_path.empty(); }
  bool is_deleted() const { return new_path.empty(); }
};

struct UnifiedDiff {
  std::vector<FileDiff> files;

  bool empty() const { return files.empty(); }
};

/// Accepts `git diff` output and plain `diff -u` output. Throws
/// Error(MalformedDiff) on inconsistent hunk headers.
UnifiedDiff parse_unified_diff(std::string_view text);

/// Re-renders a parsed diff as `git diff`-style text.
std::string to_text(const UnifiedDiff& diff);

/// Applies one file's hunks to `base`. Context and removed lines must match
/// exactly; otherwise throws Error(MalformedDiff).
std::string apply_file_diff(std::string_view base, const FileDiff& diff);

/// Which paths count as object-language source.
struct SourceFilter {
  std::vector<std::string> extensions{".java"};
  std::vector<std::string> exclude_globs{"test/*",   "tests/*", "*/test/*", "*/tests/*", "*Test.java",
                                         "*Tests.java", "doc/*",  "docs/*",   "*/doc/*",   "*/docs/*"};

  bool is_source(std::string_view path) const;
};

/// Affected lines in one hunk: a removed line positionally paired with an
/// added line counts once, unpaired additions and removals count once each.
int changed_line_count(const Hunk& hunk);
int changed_line_count(const FileDiff& file);
/// Sum over files accepted by `filter`; other files contribute zero.
int changed_line_count(const UnifiedDiff& diff, const SourceFilter& filter);

}  // namespace fixrank

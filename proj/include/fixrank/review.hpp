#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fixrank/category.hpp"
#include "fixrank/corpus.hpp"

namespace fixrank {

struct Verdict {
  std::string reviewer_id;
  bool accept = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ReviewRecord {
  std::string triple_id;
  BugCategory proposed_category;
  std::vector<Verdict> reviewer_verdicts;

  /// Accepted needs at least two verdicts, all accept; any reject rejects.
  ReviewStatus final_status() const;
};

/// Reviewer slots written for each exported record.
inline const std::vector<std::string> kDefaultReviewers{"reviewer1", "reviewer2"};

/// Review file text for the pending records, in input order.
std::string render_review_queue(const std::vector<CorpusRecord>& records,
                                const std::vector<std::string>& reviewers = kDefaultReviewers,
                                std::size_t diff_excerpt_lines = 40);

/// Writes the queue of the corpus' pending records. Returns how many.
std::size_t export_review_queue(const Corpus& corpus, const std::filesystem::path& destination);

/// Parses a review file. Empty verdict slots are skipped. Throws
/// Error(MalformedReviewFile) on unknown keys, bad verdicts or a reviewer
/// appearing twice in one record.
std::vector<ReviewRecord> parse_review_file(std::string_view text);

struct ImportSummary {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t pending = 0;
};

/// Applies verdicts to the corpus. Every id must exist (UnknownTripleId) and
/// keep its proposed category (MalformedReviewFile). All records are checked
/// before any is written.
ImportSummary import_review_verdicts(const Corpus& corpus, const std::filesystem::path& review_file);

}  // namespace fixrank

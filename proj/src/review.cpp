#include "fixrank/review.hpp"

#include <algorithm>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

constexpr std::string_view kHeader =
    "# fixrank review queue\n"
    "# Fill each verdict[<reviewer>] slot with accept or reject. A record is\n"
    "# accepted once two reviewers accept it; any reject removes it.\n";

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::MalformedReviewFile, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

ReviewStatus ReviewRecord::final_status() const {
  bool any_reject = std::any_of(reviewer_verdicts.begin(), reviewer_verdicts.end(), [](const Verdict& v) { return !v.accept; });
  if (any_reject) return ReviewStatus::Rejected;
  return reviewer_verdicts.size() >= 2 ? ReviewStatus::Accepted : ReviewStatus::Pending;
}

std::string render_review_queue(const std::vector<CorpusRecord>& records, const std::vector<std::string>& reviewers,
                                std::size_t diff_excerpt_lines) {
  std::string out(kHeader);
  for (const auto& r : records) {
    if (r.status != ReviewStatus::Pending) continue;
    out += "\nid: " + r.triple_id + '\n';
    out += "category: " + r.category.name() + '\n';
    for (auto line : split_lines(r.message)) out += "message: " + std::string(line) + '\n';
    auto diff_lines = split_lines(r.diff);
    for (std::size_t i = 0; i < diff_lines.size() && i < diff_excerpt_lines; ++i)
      out += "diff: " + std::string(diff_lines[i]) + '\n';
    for (const auto& reviewer : reviewers) out += "verdict[" + reviewer + "]:\n";
  }
  return out;
}

std::size_t export_review_queue(const Corpus& corpus, const std::filesystem::path& destination) {
  auto records = corpus.load_all();
  write_file(destination, render_review_queue(records));
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.status == ReviewStatus::Pending; }));
}

std::vector<ReviewRecord> parse_review_file(std::string_view text) {
  std::vector<ReviewRecord> out;
  bool open = false;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (starts_with(line, "#")) continue;
    if (trim(line).empty()) {
      open = false;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) malformed(line_no, "expected 'key: value'");
    auto key = line.substr(0, colon);
    auto value = trim(line.substr(colon + 1));
    if (key == "id") {
      if (open) malformed(line_no, "second id in one record");
      if (value.empty()) malformed(line_no, "empty id");
      out.push_back({std::string(value), {}, {}});
      open = true;
      continue;
    }
    if (!open) malformed(line_no, "field outside a record");
    auto& rec = out.back();
    if (key == "category") {
      rec.proposed_category = BugCategory(std::string(value));
    } else if (key == "message" || key == "diff") {
      // informational only
    } else if (starts_with(key, "verdict[") && ends_with(key, "]")) {
      std::string reviewer(key.substr(8, key.size() - 9));
      if (reviewer.empty()) malformed(line_no, "verdict without reviewer id");
      if (value.empty()) continue;
      if (value != "accept" && value != "reject") malformed(line_no, "verdict must be accept or reject");
      bool dup = std::any_of(rec.reviewer_verdicts.begin(), rec.reviewer_verdicts.end(),
                             [&](const Verdict& v) { return v.reviewer_id == reviewer; });
      if (dup) malformed(line_no, "reviewer '" + reviewer + "' appears twice");
      rec.reviewer_verdicts.push_back({reviewer, value == "accept"});
    } else {
      malformed(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  return out;
}

ImportSummary import_review_verdicts(const Corpus& corpus, const std::filesystem::path& review_file) {
  auto reviews = parse_review_file(read_file(review_file));
  std::vector<CorpusRecord> updated;
  for (const auto& review : reviews) {
    auto record = corpus.load(review.triple_id);
    if (!review.proposed_category.empty() && review.proposed_category != record.category)
      fail(ErrorCode::MalformedReviewFile,
           review.triple_id + ": category changed from " + record.category.name() + " to " +
               review.proposed_category.name());
    record.status = review.final_status();
    updated.push_back(std::move(record));
  }
  ImportSummary summary;
  for (const auto& record : updated) {
    corpus.store(record);
    switch (record.status) {
      case ReviewStatus::Accepted:
        ++summary.accepted;
        break;
      case ReviewStatus::Rejected:
        ++summary.rejected;
        break;
      case ReviewStatus::Pending:
        ++summary.pending;
        break;
    }
  }
  return summary;
}

}  // namespace fixrank

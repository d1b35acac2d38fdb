#include "fixrank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

constexpr std::string_view kMagic = "fixrank-record: 1";

// Cursor over the record text. Length-prefixed sections are read verbatim.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view line() {
    if (at_end()) fail(ErrorCode::IOFailure, "truncated corpus record");
    auto nl = text_.find('\n', pos_);
    auto end = nl == std::string_view::npos ? text_.size() : nl;
    auto out = text_.substr(pos_, end - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    return out;
  }

  std::string_view bytes(std::size_t n) {
    if (pos_ + n + 1 > text_.size() || text_[pos_ + n] != '\n')
      fail(ErrorCode::IOFailure, "corpus record section length mismatch");
    auto out = text_.substr(pos_, n);
    pos_ += n + 1;
    return out;
  }

  std::string_view rest() {
    auto out = text_.substr(pos_);
    pos_ = text_.size();
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::IOFailure, "bad length in corpus record: " + std::string(s));
  return v;
}

}  // namespace

std::string_view to_string(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::Pending:
      return "pending";
    case ReviewStatus::Accepted:
      return "accepted";
    case ReviewStatus::Rejected:
      return "rejected";
  }
  return "pending";
}

ReviewStatus parse_review_status(std::string_view text) {
  if (text == "pending") return ReviewStatus::Pending;
  if (text == "accepted") return ReviewStatus::Accepted;
  if (text == "rejected") return ReviewStatus::Rejected;
  fail(ErrorCode::IOFailure, "unknown review status: " + std::string(text));
}

std::string serialize_record(const CorpusRecord& r) {
  std::string out;
  out += kMagic;
  out += '\n';
  auto field = [&](std::string_view key, std::string_view value) {
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  };
  field("id", r.triple_id);
  field("repo", r.repo_id);
  field("pre-commit", r.pre_commit);
  field("post-commit", r.post_commit);
  field("category", r.category.name());
  field("status", to_string(r.status));
  field("catalog-version", r.catalog_version);
  field("kind", r.kind.signature());
  out += "message " + std::to_string(r.message.size()) + '\n' + r.message + '\n';
  for (const auto& s : r.buggy_source)
    out += "source " + std::to_string(s.content.size()) + ' ' + s.path + '\n' + s.content + '\n';
  out += "diff\n";
  out += r.diff;
  return out;
}

CorpusRecord parse_record(std::string_view text) {
  Reader in(text);
  if (in.line() != kMagic) fail(ErrorCode::IOFailure, "not a corpus record");
  std::map<std::string, std::string, std::less<>> header;
  for (auto key : {"id", "repo", "pre-commit", "post-commit", "category", "status", "catalog-version", "kind"}) {
    auto line = in.line();
    std::string prefix = std::string(key) + ": ";
    if (!starts_with(line, prefix) && line != std::string(key) + ":")
      fail(ErrorCode::IOFailure, "corpus record missing '" + std::string(key) + "'");
    header[key] = line.size() > prefix.size() ? std::string(line.substr(prefix.size())) : std::string();
  }
  CorpusRecord r;
  r.triple_id = header["id"];
  r.repo_id = header["repo"];
  r.pre_commit = header["pre-commit"];
  r.post_commit = header["post-commit"];
  r.category = BugCategory(header["category"]);
  r.status = parse_review_status(header["status"]);
  r.catalog_version = header["catalog-version"];
  // validated against a catalog by the trainer
  std::vector<std::string> members;
  if (!header["kind"].empty())
    for (auto m : split(header["kind"], '+')) members.emplace_back(m);
  r.kind = PatchKind(std::move(members));

  auto msg = in.line();
  if (!starts_with(msg, "message ")) fail(ErrorCode::IOFailure, "corpus record missing message section");
  r.message = std::string(in.bytes(parse_size(msg.substr(8))));
  while (true) {
    auto line = in.line();
    if (line == "diff") break;
    if (!starts_with(line, "source ")) fail(ErrorCode::IOFailure, "unexpected line in corpus record: " + std::string(line));
    auto rest = line.substr(7);
    auto sp = rest.find(' ');
    if (sp == std::string_view::npos) fail(ErrorCode::IOFailure, "source section without path");
    SourceFile f;
    f.path = std::string(rest.substr(sp + 1));
    f.content = std::string(in.bytes(parse_size(rest.substr(0, sp))));
    r.buggy_source.push_back(std::move(f));
  }
  r.diff = std::string(in.rest());
  return r;
}

std::filesystem::path Corpus::record_path(const std::string& triple_id) const {
  return root_ / "records" / (triple_id + ".rec");
}

std::vector<CorpusRecord> Corpus::load_all() const {
  std::vector<CorpusRecord> out;
  auto dir = root_ / "records";
  std::error_code ec;
  if (!std::filesystem::exists(dir, ec)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".rec") continue;
    out.push_back(parse_record(read_file(entry.path())));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.triple_id < b.triple_id; });
  return out;
}

CorpusRecord Corpus::load(const std::string& triple_id) const {
  if (!contains(triple_id)) fail(ErrorCode::UnknownTripleId, triple_id);
  return parse_record(read_file(record_path(triple_id)));
}

bool Corpus::contains(const std::string& triple_id) const {
  std::error_code ec;
  return std::filesystem::is_regular_file(record_path(triple_id), ec);
}

void Corpus::store(const CorpusRecord& record) const {
  if (record.triple_id.empty()) fail(ErrorCode::InvalidArgument, "record without triple id");
  write_file(record_path(record.triple_id), serialize_record(record));
}

std::vector<CorpusRecord> training_records(const std::vector<CorpusRecord>& records, bool no_review) {
  std::vector<CorpusRecord> out;
  for (const auto& r : records) {
    bool visible = no_review ? r.status != ReviewStatus::Rejected : r.status == ReviewStatus::Accepted;
    if (visible) out.push_back(r);
  }
  return out;
}

std::string make_triple_id(std::string_view repo_id, std::string_view post_commit) {
  std::string id;
  for (char c : repo_id) {
    bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    id += safe ? c : '_';
  }
  while (!id.empty() && id.front() == '.') id.erase(id.begin());
  id += '-';
  id += post_commit.substr(0, 12);
  return id;
}

}  // namespace fixrank

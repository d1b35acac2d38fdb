#include "fixrank/bug_classifier.hpp"

#include <algorithm>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

// Mirrors data/patterns.txt.
constexpr std::string_view kBuiltinPatterns = R"patterns(
# category<TAB>pattern-name<TAB>ECMAScript regex, matched case-insensitively
# anywhere in the message. Line order is precedence: the first category
# with a matching pattern wins.
overflow	overflow_bugs	\b(buffer|array)\b[\s\S]*\boverflow\b|\bout\sof\s(bounds|range|limit)\b|\b(heap|stack|integer)\soverflow\b|(Array|String|Index)OutOfBoundsException|\bBufferOverflowException\b
null_pointer	null_bugs	null\s*pointer|NPE|NullPointerException
logic	logic_bugs	\b(logic|logical)\b|\b(fix|bug|issue|wrong|error|fault|assert|correct|condition|unexpected)\s+(incorrect|wrong)\s+(function|output|result)\b
)patterns";

}  // namespace

std::regex compile_pattern(const std::string& expression) {
  try {
    return std::regex(expression, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
  } catch (const std::regex_error& e) {
    fail(ErrorCode::InvalidArgument, "bad pattern '" + expression + "': " + e.what());
  }
}

BugClassifier::BugClassifier(std::vector<BugPattern> patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) fail(ErrorCode::InvalidArgument, "classifier needs at least one pattern");
  compiled_.reserve(patterns_.size());
  for (const auto& p : patterns_) {
    if (p.category.empty() || p.name.empty()) fail(ErrorCode::InvalidArgument, "pattern without category or name");
    compiled_.push_back(compile_pattern(p.expression));
  }
}

std::string_view BugClassifier::builtin_text() { return kBuiltinPatterns.substr(1); }

const BugClassifier& BugClassifier::builtin() {
  static const BugClassifier instance = parse(builtin_text());
  return instance;
}

BugClassifier BugClassifier::parse(std::string_view text) {
  std::vector<BugPattern> patterns;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || starts_with(trim(line), "#")) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      fail(ErrorCode::InvalidArgument, "pattern line needs category, name and regex: " + std::string(line));
    patterns.push_back({std::string(trim(fields[0])), std::string(trim(fields[1])), std::string(fields[2])});
  }
  return BugClassifier(std::move(patterns));
}

BugClassifier BugClassifier::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::vector<std::string> BugClassifier::categories() const {
  std::vector<std::string> out;
  for (const auto& p : patterns_)
    if (std::find(out.begin(), out.end(), p.category) == out.end()) out.push_back(p.category);
  return out;
}

std::optional<CategoryMatch> BugClassifier::classify(std::string_view message) const {
  const std::string text(message);
  for (const auto& category : categories()) {
    CategoryMatch match{BugCategory(category), {}, {}};
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (patterns_[i].category != category) continue;
      bool hit = false;
      for (auto it = std::sregex_iterator(text.begin(), text.end(), compiled_[i]); it != std::sregex_iterator();
           ++it) {
        hit = true;
        match.matched_spans.emplace_back(static_cast<std::size_t>(it->position()),
                                         static_cast<std::size_t>(it->length()));
      }
      if (hit) match.matched_patterns.push_back(patterns_[i].name);
    }
    if (!match.matched_patterns.empty()) return match;
  }
  return std::nullopt;
}

bool BugClassifier::matches_any(std::string_view message) const {
  const std::string text(message);
  return std::any_of(compiled_.begin(), compiled_.end(), [&](const std::regex& r) { return std::regex_search(text, r); });
}

std::optional<CategoryMatch> classify_message(std::string_view message) {
  return BugClassifier::builtin().classify(message);
}

}  // namespace fixrank

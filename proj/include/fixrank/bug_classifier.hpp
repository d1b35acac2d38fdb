#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fixrank/category.hpp"

namespace fixrank {

struct CategoryMatch {
  BugCategory category;
  std::vector<std::string> matched_patterns;                     // never empty
  std::vector<std::pair<std::size_t, std::size_t>> matched_spans;  // (offset, length) in the message
};

struct BugPattern {
  std::string category;
  std::string name;
  std::string expression;
};

/// Regex-based message classifier. Patterns are tried in configuration order
/// and the first category with any matching pattern is assigned, so at most
/// one category is ever reported. Matching is case-insensitive.
class BugClassifier {
 public:
  explicit BugClassifier(std::vector<BugPattern> patterns);

  /// The shipped overflow, null_pointer, logic patterns.
  static const BugClassifier& builtin();
  static std::string_view builtin_text();
  /// `category<TAB>name<TAB>regex` lines; '#' starts a comment line.
  static BugClassifier parse(std::string_view text);
  static BugClassifier load(const std::filesystem::path& path);

  std::optional<CategoryMatch> classify(std::string_view message) const;
  /// True when any pattern matches.
  bool matches_any(std::string_view message) const;

  const std::vector<BugPattern>& patterns() const noexcept { return patterns_; }
  /// Categories in precedence order.
  std::vector<std::string> categories() const;

 private:
  std::vector<BugPattern> patterns_;
  std::vector<std::regex> compiled_;
};

std::optional<CategoryMatch> classify_message(std::string_view message);

/// Compiles `expression` with the classifier's flags; throws
/// Error(InvalidArgument) on a syntax error.
std::regex compile_pattern(const std::string& expression);

}  // namespace fixrank

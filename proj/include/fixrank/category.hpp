#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixrank {

/// A bug category such as "null_pointer". Only meaningful relative to the
/// CategorySet that defines its canonical position.
class BugCategory {
 public:
  BugCategory() = default;
  explicit BugCategory(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend bool operator==(const BugCategory&, const BugCategory&) = default;

 private:
  std::string name_;
};

/// Closed, ordered set of categories. The order is the canonical order used
/// for serialization and for the final tie-break in category estimation.
class CategorySet {
 public:
  CategorySet() = default;
  explicit CategorySet(std::vector<std::string> names);

  /// logic < null_pointer < overflow
  static const CategorySet& standard();

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  BugCategory at(std::size_t index) const { return BugCategory(names_.at(index)); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const CategorySet&, const CategorySet&) = default;

 private:
  std::vector<std::string> names_;
};

}  // namespace fixrank

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "fixrank/catalog.hpp"

namespace fixrank {

/// A set of feature/modification identifiers. The empty set is a legal kind
/// (a patch with no recognised syntactic change).
class PatchKind {
 public:
  PatchKind() = default;
  PatchKind(std::initializer_list<std::string> ids);
  explicit PatchKind(std::vector<std::string> ids);

  void insert(std::string id);
  void merge(const PatchKind& other);

  const std::vector<std::string>& members() const noexcept { return members_; }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::string_view id) const;

  /// Members joined with '+' in lexicographic order. Throws UnknownFeature
  /// if a member is absent from `catalog`.
  std::string signature(const Catalog& catalog) const;
  /// Same join without catalog validation.
  std::string signature() const;

  /// Inverse of signature(); rejects ids missing from the catalog.
  static PatchKind parse(std::string_view signature, const Catalog& catalog);

  friend bool operator==(const PatchKind&, const PatchKind&) = default;

 private:
  std::vector<std::string> members_;  // sorted, unique
};

/// Signature of a kind; the free-function form used across the pipeline.
inline std::string kind_signature(const PatchKind& kind, const Catalog& catalog) {
  return kind.signature(catalog);
}

}  // namespace fixrank

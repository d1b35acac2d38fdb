#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixrank {

enum class Modification { Add, Remove, Modify };

std::string_view to_string(Modification m);

/// One feature/modification combination, e.g. conditional.modify.condition_strengthen.
struct FeatureModification {
  std::string feature;
  Modification modification = Modification::Add;
  std::string qualifier;  // empty when the combination has no sub-component

  /// `feature.modification[.qualifier]`
  std::string id() const;

  static std::optional<FeatureModification> parse(std::string_view id);

  friend bool operator==(const FeatureModification&, const FeatureModification&) = default;
};

/// The versioned list of every feature/modification combination a patch
/// kind may contain. Models trained against one catalog version are not
/// comparable with another.
class Catalog {
 public:
  Catalog(std::string version, std::vector<FeatureModification> entries);

  /// The catalog compiled into the library (mirrors data/catalog.txt).
  static const Catalog& builtin();
  static std::string_view builtin_text();

  static Catalog parse(std::string_view text);
  static Catalog load(const std::filesystem::path& path);
  std::string serialize() const;

  const std::string& version() const noexcept { return version_; }
  const std::vector<FeatureModification>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  bool contains(std::string_view id) const;

 private:
  std::string version_;
  std::vector<FeatureModification> entries_;  // sorted by id
  std::vector<std::string> ids_;              // sorted, parallel to entries_
};

}  // namespace fixrank

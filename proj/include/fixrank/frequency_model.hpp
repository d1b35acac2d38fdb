#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fixrank/category.hpp"
#include "fixrank/patch_kind.hpp"

namespace fixrank {

/// An exact fraction N(c,k) / totals(c).
struct Frequency {
  std::uint64_t count = 0;
  std::uint64_t total = 0;

  double value() const { return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total); }
};

/// Historic counts of (bug category, patch kind signature) pairs. Frequencies
/// are always derived from the integer counts at query time.
///
/// Immutable once built; share freely across reader threads.
class FrequencyModel {
 public:
  using KindCounts = std::map<std::string, std::uint64_t>;  // signature -> N(c,k)

  FrequencyModel() = default;
  FrequencyModel(CategorySet categories, std::vector<KindCounts> counts, std::string catalog_version,
                 std::string corpus_fingerprint);

  const CategorySet& categories() const noexcept { return categories_; }
  const std::string& catalog_version() const noexcept { return catalog_version_; }
  const std::string& corpus_fingerprint() const noexcept { return corpus_fingerprint_; }

  /// counts for the category at canonical position `index`
  const KindCounts& counts(std::size_t index) const { return counts_.at(index); }
  std::uint64_t count(std::size_t category_index, const std::string& signature) const;
  std::uint64_t total(std::size_t category_index) const { return totals_.at(category_index); }
  std::uint64_t total(const BugCategory& c) const { return total(categories_.require_index(c.name())); }

  /// N(c,k)/totals(c); zero for kinds never seen with c. Throws EmptyCategory
  /// when totals(c) is zero.
  Frequency exact_frequency(std::size_t category_index, const std::string& signature) const;
  double frequency(const BugCategory& c, const std::string& signature) const;

  bool has_data() const;

  /// Same model with every count multiplied by `factor`.
  FrequencyModel scaled(std::uint64_t factor) const;

  friend bool operator==(const FrequencyModel&, const FrequencyModel&) = default;

 private:
  CategorySet categories_;
  std::vector<KindCounts> counts_;
  std::vector<std::uint64_t> totals_;
  std::string catalog_version_;
  std::string corpus_fingerprint_;
};

/// f_c(k) for a kind value; see FrequencyModel::frequency.
double frequency(const FrequencyModel& model, const BugCategory& c, const PatchKind& k);

}  // namespace fixrank

#include <algorithm>

#include "fixrank/category.hpp"
#include "fixrank/error.hpp"
#include "fixrank/frequency_model.hpp"
#include "fixrank/patch_kind.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IOFailure: return "IOFailure";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::EmptyCategory: return "EmptyCategory";
    case ErrorCode::CatalogMismatch: return "CatalogMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::RepoUnreadable: return "RepoUnreadable";
    case ErrorCode::BranchMissing: return "BranchMissing";
    case ErrorCode::MalformedDiff: return "MalformedDiff";
    case ErrorCode::MalformedReviewFile: return "MalformedReviewFile";
    case ErrorCode::UnknownTripleId: return "UnknownTripleId";
    case ErrorCode::Unparseable: return "Unparseable";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InsufficientRecords: return "InsufficientRecords";
    case ErrorCode::EmptyPatchSet: return "EmptyPatchSet";
    case ErrorCode::MixedBugIds: return "MixedBugIds";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::EmptyOutcomes: return "EmptyOutcomes";
  }
  return "Error";
}

// --- categories -------------------------------------------------------------

CategorySet::CategorySet(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  if (std::adjacent_find(names_.begin(), names_.end()) != names_.end())
    fail(ErrorCode::InvalidArgument, "duplicate bug category");
  for (const auto& n : names_)
    if (n.empty()) fail(ErrorCode::InvalidArgument, "empty bug category name");
}

const CategorySet& CategorySet::standard() {
  static const CategorySet set({"logic", "null_pointer", "overflow"});
  return set;
}

std::optional<std::size_t> CategorySet::index_of(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name,
                             [](const std::string& a, std::string_view b) { return std::string_view(a) < b; });
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t CategorySet::require_index(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) fail(ErrorCode::InvalidArgument, "unknown bug category '" + std::string(name) + "'");
  return *idx;
}

// --- patch kinds ------------------------------------------------------------

PatchKind::PatchKind(std::initializer_list<std::string> ids) : PatchKind(std::vector<std::string>(ids)) {}

PatchKind::PatchKind(std::vector<std::string> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

void PatchKind::insert(std::string id) {
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  if (it == members_.end() || *it != id) members_.insert(it, std::move(id));
}

void PatchKind::merge(const PatchKind& other) {
  for (const auto& id : other.members_) insert(id);
}

bool PatchKind::contains(std::string_view id) const {
  return std::binary_search(members_.begin(), members_.end(), id,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

std::string PatchKind::signature() const { return join(members_, "+"); }

std::string PatchKind::signature(const Catalog& catalog) const {
  for (const auto& m : members_)
    if (!catalog.contains(m)) fail(ErrorCode::UnknownFeature, "'" + m + "' is not in catalog " + catalog.version());
  return signature();
}

PatchKind PatchKind::parse(std::string_view signature, const Catalog& catalog) {
  PatchKind kind;
  if (signature.empty()) return kind;
  for (auto part : split(signature, '+')) {
    if (!catalog.contains(part))
      fail(ErrorCode::UnknownFeature, "'" + std::string(part) + "' is not in catalog " + catalog.version());
    kind.insert(std::string(part));
  }
  return kind;
}

// --- frequency model --------------------------------------------------------

FrequencyModel::FrequencyModel(CategorySet categories, std::vector<KindCounts> counts, std::string catalog_version,
                               std::string corpus_fingerprint)
    : categories_(std::move(categories)),
      counts_(std::move(counts)),
      catalog_version_(std::move(catalog_version)),
      corpus_fingerprint_(std::move(corpus_fingerprint)) {
  if (counts_.size() != categories_.size())
    fail(ErrorCode::InvalidArgument, "frequency model: one count table per category required");
  totals_.reserve(counts_.size());
  for (auto& table : counts_) {
    std::uint64_t sum = 0;
    for (auto it = table.begin(); it != table.end();) {
      if (it->second == 0) {
        it = table.erase(it);  // sparse: absent means zero
        continue;
      }
      sum += it->second;
      ++it;
    }
    totals_.push_back(sum);
  }
}

std::uint64_t FrequencyModel::count(std::size_t category_index, const std::string& signature) const {
  const auto& table = counts_.at(category_index);
  auto it = table.find(signature);
  return it == table.end() ? 0 : it->second;
}

Frequency FrequencyModel::exact_frequency(std::size_t category_index, const std::string& signature) const {
  auto total = totals_.at(category_index);
  if (total == 0) fail(ErrorCode::EmptyCategory, "no training data for category " + categories_.names()[category_index]);
  return {count(category_index, signature), total};
}

double FrequencyModel::frequency(const BugCategory& c, const std::string& signature) const {
  return exact_frequency(categories_.require_index(c.name()), signature).value();
}

bool FrequencyModel::has_data() const {
  return std::any_of(totals_.begin(), totals_.end(), [](auto t) { return t > 0; });
}

FrequencyModel FrequencyModel::scaled(std::uint64_t factor) const {
  auto counts = counts_;
  for (auto& table : counts)
    for (auto& [sig, n] : table) n *= factor;
  return FrequencyModel(categories_, std::move(counts), catalog_version_, corpus_fingerprint_);
}

double frequency(const FrequencyModel& model, const BugCategory& c, const PatchKind& k) {
  return model.frequency(c, k.signature());
}

}  // namespace fixrank

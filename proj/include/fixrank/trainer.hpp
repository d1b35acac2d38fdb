#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fixrank/catalog.hpp"
#include "fixrank/category.hpp"
#include "fixrank/corpus.hpp"
#include "fixrank/frequency_model.hpp"

namespace fixrank {

/// SHA-256 over the sorted triple ids, one per line.
std::string corpus_fingerprint(const std::vector<CorpusRecord>& records);

/// Counts N(c,k) over `records`. Every record must carry the catalog's
/// version and only catalog members (CatalogMismatch) and a category from
/// `categories` (InvalidArgument). Throws EmptyCorpus on no records.
///
/// `train` shards the count across OpenMP threads and merges by addition;
/// `train_serial` is the single-threaded reference.
FrequencyModel train(const std::vector<CorpusRecord>& records, const Catalog& catalog = Catalog::builtin(),
                     const CategorySet& categories = CategorySet::standard());
FrequencyModel train_serial(const std::vector<CorpusRecord>& records, const Catalog& catalog = Catalog::builtin(),
                            const CategorySet& categories = CategorySet::standard());

/// Uniform sample without replacement of exactly `sizes[c]` records per
/// category c, deterministic in `seed`. Categories not named in `sizes` are
/// left out. Output is sorted by triple id. Throws InsufficientRecords.
std::vector<CorpusRecord> stratified_sample(const std::vector<CorpusRecord>& records,
                                            const std::map<std::string, std::size_t>& sizes, std::uint64_t seed);

/// Per-category sizes summing to round(fraction * |records|), split by the
/// largest-remainder method in proportion to each category's share.
std::map<std::string, std::size_t> proportional_sizes(const std::vector<CorpusRecord>& records, double fraction);

inline constexpr int kModelFormatVersion = 1;

/// Text form: header lines then `category<TAB>signature<TAB>count` sorted by
/// category, then signature. The checksum covers every other line.
std::string serialize_model(const FrequencyModel& model);
/// Throws ChecksumMismatch on any edit and VersionMismatch when the format
/// or catalog version differs from what is expected.
FrequencyModel parse_model(std::string_view text, const Catalog& catalog = Catalog::builtin());

void save_model(const FrequencyModel& model, const std::filesystem::path& path);
FrequencyModel load_model(const std::filesystem::path& path, const Catalog& catalog = Catalog::builtin());

}  // namespace fixrank

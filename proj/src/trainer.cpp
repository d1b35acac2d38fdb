#include "fixrank/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <random>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

struct Keyed {
  std::size_t category;
  std::string signature;
};

Keyed key_of(const CorpusRecord& r, const Catalog& catalog, const CategorySet& categories) {
  if (r.catalog_version != catalog.version())
    fail(ErrorCode::CatalogMismatch, r.triple_id + " was classified with catalog " + r.catalog_version +
                                         ", training uses " + catalog.version());
  for (const auto& m : r.kind.members())
    if (!catalog.contains(m)) fail(ErrorCode::CatalogMismatch, r.triple_id + ": '" + m + "' is not in the catalog");
  auto index = categories.index_of(r.category.name());
  if (!index) fail(ErrorCode::InvalidArgument, r.triple_id + ": unknown category '" + r.category.name() + "'");
  return {*index, r.kind.signature()};
}

FrequencyModel finish(const std::vector<CorpusRecord>& records, const Catalog& catalog, const CategorySet& categories,
                      std::vector<FrequencyModel::KindCounts> counts) {
  return FrequencyModel(categories, std::move(counts), catalog.version(), corpus_fingerprint(records));
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::ChecksumMismatch, "bad count '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string corpus_fingerprint(const std::vector<CorpusRecord>& records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.triple_id);
  std::sort(ids.begin(), ids.end());
  std::string text;
  for (const auto& id : ids) text += id + '\n';
  return sha256_hex(text);
}

FrequencyModel train_serial(const std::vector<CorpusRecord>& records, const Catalog& catalog,
                            const CategorySet& categories) {
  if (records.empty()) fail(ErrorCode::EmptyCorpus, "no training records");
  std::vector<FrequencyModel::KindCounts> counts(categories.size());
  for (const auto& r : records) {
    auto k = key_of(r, catalog, categories);
    ++counts[k.category][k.signature];
  }
  return finish(records, catalog, categories, std::move(counts));
}

FrequencyModel train(const std::vector<CorpusRecord>& records, const Catalog& catalog, const CategorySet& categories) {
  if (records.empty()) fail(ErrorCode::EmptyCorpus, "no training records");
  std::vector<FrequencyModel::KindCounts> counts(categories.size());
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel
  {
    std::vector<FrequencyModel::KindCounts> local(categories.size());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        auto k = key_of(records[static_cast<std::size_t>(i)], catalog, categories);
        ++local[k.category][k.signature];
      } catch (...) {
#pragma omp critical(fixrank_train_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(fixrank_train_merge)
    for (std::size_t c = 0; c < local.size(); ++c)
      for (const auto& [sig, v] : local[c]) counts[c][sig] += v;
  }
  if (error) std::rethrow_exception(error);
  return finish(records, catalog, categories, std::move(counts));
}

std::vector<CorpusRecord> stratified_sample(const std::vector<CorpusRecord>& records,
                                            const std::map<std::string, std::size_t>& sizes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusRecord> out;
  for (const auto& [category, size] : sizes) {
    std::vector<const CorpusRecord*> pool;
    for (const auto& r : records)
      if (r.category.name() == category) pool.push_back(&r);
    if (pool.size() < size)
      fail(ErrorCode::InsufficientRecords, category + ": requested " + std::to_string(size) + ", available " +
                                               std::to_string(pool.size()));
    std::sort(pool.begin(), pool.end(), [](const auto* a, const auto* b) { return a->triple_id < b->triple_id; });
    std::vector<const CorpusRecord*> chosen;
    std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), size, rng);
    for (const auto* r : chosen) out.push_back(*r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.triple_id < b.triple_id; });
  return out;
}

std::map<std::string, std::size_t> proportional_sizes(const std::vector<CorpusRecord>& records, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) fail(ErrorCode::InvalidArgument, "sample fraction must be in [0, 1]");
  std::map<std::string, std::size_t> available;
  for (const auto& r : records) ++available[r.category.name()];
  auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(records.size())));
  std::map<std::string, std::size_t> sizes;
  std::vector<std::pair<double, std::string>> remainders;
  std::size_t assigned = 0;
  for (const auto& [c, n] : available) {
    double exact = static_cast<double>(target) * static_cast<double>(n) / static_cast<double>(records.size());
    auto whole = static_cast<std::size_t>(std::floor(exact));
    sizes[c] = whole;
    assigned += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), c);
  }
  // largest remainder first, ties in category order
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i, ++assigned) ++sizes[remainders[i].second];
  return sizes;
}

std::string serialize_model(const FrequencyModel& model) {
  std::string header;
  header += "model-version: " + std::to_string(kModelFormatVersion) + '\n';
  header += "catalog-version: " + model.catalog_version() + '\n';
  header += "corpus-fingerprint: " + model.corpus_fingerprint() + '\n';
  header += "categories: " + join(model.categories().names(), " ") + '\n';
  std::string body;
  for (std::size_t c = 0; c < model.categories().size(); ++c)
    for (const auto& [sig, n] : model.counts(c))
      body += model.categories().names()[c] + '\t' + sig + '\t' + std::to_string(n) + '\n';
  return header + "checksum: " + sha256_hex(header + body) + '\n' + body;
}

FrequencyModel parse_model(std::string_view text, const Catalog& catalog) {
  auto lines = split_lines(text);
  std::string covered;
  std::string checksum;
  bool seen_checksum = false;
  for (auto line : lines) {
    if (starts_with(line, "checksum: ") && !seen_checksum) {
      checksum = std::string(line.substr(10));
      seen_checksum = true;
      continue;
    }
    covered += line;
    covered += '\n';
  }
  if (!seen_checksum) fail(ErrorCode::ChecksumMismatch, "model file has no checksum line");
  if (sha256_hex(covered) != checksum) fail(ErrorCode::ChecksumMismatch, "model file content does not match its checksum");

  if (lines.size() < 5 || !starts_with(lines[4], "checksum: "))
    fail(ErrorCode::ChecksumMismatch, "truncated model header");
  auto value = [&](std::size_t i, std::string_view key) {
    std::string prefix = std::string(key) + ": ";
    if (!starts_with(lines[i], prefix) && lines[i] != std::string(key) + ":")
      fail(ErrorCode::VersionMismatch, "expected '" + std::string(key) + "' header");
    return lines[i].size() > prefix.size() ? std::string(lines[i].substr(prefix.size())) : std::string();
  };
  auto version = value(0, "model-version");
  if (version != std::to_string(kModelFormatVersion))
    fail(ErrorCode::VersionMismatch, "unsupported model-version " + version);
  auto catalog_version = value(1, "catalog-version");
  if (catalog_version != catalog.version())
    fail(ErrorCode::VersionMismatch, "model uses catalog " + catalog_version + ", loaded catalog is " + catalog.version());
  auto fingerprint = value(2, "corpus-fingerprint");
  auto declared = value(3, "categories");
  std::vector<std::string> names;
  for (auto n : split(declared, ' '))
    if (!n.empty()) names.emplace_back(n);
  CategorySet categories(std::move(names));

  std::vector<FrequencyModel::KindCounts> counts(categories.size());
  for (std::size_t i = 5; i < lines.size(); ++i) {
    auto fields = split(lines[i], '\t');
    if (fields.size() != 3) fail(ErrorCode::ChecksumMismatch, "bad model line " + std::to_string(i + 1));
    auto c = categories.index_of(fields[0]);
    if (!c) fail(ErrorCode::VersionMismatch, "model line names undeclared category " + std::string(fields[0]));
    auto sig = PatchKind::parse(fields[1], catalog).signature();
    auto n = parse_u64(fields[2]);
    if (n == 0 || counts[*c].count(sig)) fail(ErrorCode::ChecksumMismatch, "bad model line " + std::to_string(i + 1));
    counts[*c][sig] = n;
  }
  return FrequencyModel(std::move(categories), std::move(counts), std::move(catalog_version), std::move(fingerprint));
}

void save_model(const FrequencyModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

FrequencyModel load_model(const std::filesystem::path& path, const Catalog& catalog) {
  return parse_model(read_file(path), catalog);
}

}  // namespace fixrank

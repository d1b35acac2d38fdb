// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fixrank/catalog.hpp"
#include "fixrank/error.hpp"
#include "fixrank/evaluator.hpp"
#include "fixrank/history_miner.hpp"
#include "fixrank/patch_classifier.hpp"
#include "fixrank/ranker.hpp"
#include "fixrank/text.hpp"
#include "fixrank/trainer.hpp"
#include "miner_fixture.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace fixrank;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::vector<std::string> ids(const std::vector<RankedPatch>& ranking) {
  std::vector<std::string> out;
  for (const auto& r : ranking) out.push_back(r.candidate.patch_id);
  return out;
}

SourcePair fixture_pair(const std::string& name) {
  auto dir = fs::path(FIXRANK_SOURCE_DIR) / "tests" / "fixtures" / "kinds" / name;
  return {read_file(dir / "before.src"), read_file(dir / "after.src"), "java", "sample/Sample.java"};
}

FrequencyModel model_from(std::vector<FrequencyModel::KindCounts> counts) {
  return FrequencyModel(CategorySet::standard(), std::move(counts), Catalog::builtin().version(), "acceptance");
}

ClassifiedCandidate scored(const std::string& id, int rank, const std::string& signature) {
  ClassifiedCandidate c;
  c.candidate.patch_id = id;
  c.candidate.bug_id = "bug";
  c.candidate.tool_id = "tool";
  c.candidate.original_rank = rank;
  c.kind = PatchKind::parse(signature, Catalog::builtin());
  return c;
}

// --- 1 ---------------------------------------------------------------------
Verdict tie_break() {
  // counts 7/5/3 in one category order the scores as 0.7/0.5/0.3 do
  auto model = model_from({{{"method_call.add", 7}, {"null_check.add", 5}, {"loop.modify.update", 3}}, {}, {}});
  auto ordered = tie_break_order({{scored("p4", 1, "null_check.add"), scored("p3", 2, "method_call.add"),
                                   scored("p2", 3, "loop.modify.update"), scored("p1", 4, "null_check.add")}});
  auto got = ids(rank_classified(model, ordered));
  return {got == std::vector<std::string>{"p3", "p4", "p1", "p2"}, "order " + join(got, ",")};
}

// --- 2 ---------------------------------------------------------------------
Verdict guard_strengthening() {
  auto signature = classify_patch({fixture_pair("guard_strengthen_null_conjunct")}).signature(Catalog::builtin());
  return {signature == "conditional.modify.condition_strengthen", "kind " + signature};
}

// --- 3 ---------------------------------------------------------------------
Verdict trainer_oracle() {
  auto start = Clock::now();
  std::mt19937_64 rng(3);
  std::size_t mismatches = 0, normalization_failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto records = fixture::random_records(std::uniform_int_distribution<std::size_t>(1, 1000)(rng), rng);
    auto model = train(records);
    // naive recount: one full scan per distinct key
    std::map<std::pair<std::string, std::string>, std::uint64_t> naive, got;
    for (const auto& r : records) naive[{r.category.name(), r.kind.signature()}] = 0;
    for (auto& [key, n] : naive)
      for (const auto& r : records) n += r.category.name() == key.first && r.kind.signature() == key.second;
    for (std::size_t c = 0; c < 3; ++c)
      for (const auto& [sig, n] : model.counts(c))
        if (n) got[{model.categories().names()[c], sig}] = n;
    mismatches += got != naive;
    for (std::size_t c = 0; c < 3; ++c) {
      if (model.total(c) == 0) continue;
      double sum = 0.0;
      for (const auto& [sig, n] : model.counts(c)) sum += model.exact_frequency(c, sig).value();
      worst = std::max(worst, std::abs(sum - 1.0));
      normalization_failures += std::abs(sum - 1.0) > 1e-12;
    }
  }
  double elapsed = seconds_since(start);
  return {mismatches == 0 && normalization_failures == 0 && elapsed < 30.0,
          std::to_string(mismatches) + " count mismatches, max |sum-1| " + format("%.1e", worst) + ", " +
              format("%.2f s", elapsed)};
}

// --- 4 ---------------------------------------------------------------------
Verdict category_estimate() {
  auto kind = classify_patch({fixture_pair("null_check_add")});
  auto signature = kind.signature(Catalog::builtin());
  // f = 0.01 / 0.16 / 0.03 over 100 records per category
  auto model = model_from({{{signature, 1}, {"loop.modify.update", 99}},
                           {{signature, 16}, {"loop.modify.update", 84}},
                           {{signature, 3}, {"loop.modify.update", 97}}});
  auto estimate = estimate_category(model, {kind}).name();
  bool ok = signature == "null_check.add" && estimate == "null_pointer";

  std::mt19937_64 rng(4);
  const auto& pool = fixture::ranking_kind_pool();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), size(1, 12), copies(2, 6);
  std::size_t changed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto m = fixture::random_model(rng);
    std::vector<PatchKind> kinds(size(rng));
    for (auto& k : kinds) k = PatchKind{pool[pick(rng)]};
    auto once = estimate_category(m, kinds);
    std::vector<PatchKind> dup;
    for (auto n = copies(rng); n > 0; --n) dup.insert(dup.end(), kinds.begin(), kinds.end());
    std::shuffle(dup.begin(), dup.end(), rng);
    changed += estimate_category(m, dup) != once;
  }
  return {ok && changed == 0,
          "kind " + signature + " -> " + estimate + ", duplication changed " + std::to_string(changed) + "/100"};
}

// --- 5 ---------------------------------------------------------------------
Verdict planted_signal() {
  auto start = Clock::now();
  fixture::PlantedSignalConfig config;
  int first = 0;
  std::size_t corpus_size = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    auto records = fixture::planted_corpus(config, rng);
    corpus_size = records.size();
    auto model = train(records);
    auto bug = fixture::planted_bug(seed % 3, config, "bug" + std::to_string(seed), rng);
    auto ranking = rank_patches(model, bug.candidates);
    first += ranking.front().candidate.patch_id == bug.dominant_patch_id;
  }
  double elapsed = seconds_since(start);
  return {first == 100 && corpus_size == 5000 && elapsed < 120.0,
          std::to_string(first) + "/100 at rank 1, corpus " + std::to_string(corpus_size) + ", " +
              format("%.1f s", elapsed)};
}

// --- 6 ---------------------------------------------------------------------
Verdict ranking_properties() {
  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.5);
  constexpr int kCases = 1000;
  std::size_t permutation = 0, stability = 0, monotone = 0, blindness = 0;
  for (int trial = 0; trial < kCases; ++trial) {
    auto model = fixture::random_model(rng);
    auto bug = fixture::random_bug(rng);
    auto ranking = rank_classified(model, tie_break_order(bug));

    std::vector<std::string> in;
    for (const auto& t : bug)
      for (const auto& c : t) in.push_back(c.candidate.patch_id);
    auto out = ids(ranking);
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    bool ranks_ok = true;
    for (std::size_t i = 0; i < ranking.size(); ++i) ranks_ok &= ranking[i].final_rank == static_cast<int>(i + 1);
    permutation += in != out || !ranks_ok;

    // equal scores keep (tool order, original rank)
    std::map<std::string, std::pair<std::size_t, int>> position;
    for (std::size_t t = 0; t < bug.size(); ++t)
      for (const auto& c : bug[t]) position[c.candidate.patch_id] = {t, c.candidate.original_rank};
    for (std::size_t i = 1; i < ranking.size(); ++i) {
      const auto& a = ranking[i - 1];
      const auto& b = ranking[i];
      if (a.score.count < b.score.count) ++monotone;
      if (a.score.count == b.score.count &&
          position[a.candidate.patch_id] > position[b.candidate.patch_id])
        ++stability;
    }

    auto relabeled = bug;
    for (auto& t : relabeled)
      for (auto& c : t) {
        if (coin(rng))
          c.candidate.correctness_label.reset();
        else
          c.candidate.correctness_label = coin(rng) ? Correctness::Correct : Correctness::PlausibleIncorrect;
      }
    blindness += ids(rank_classified(model, tie_break_order(relabeled))) != ids(ranking);
  }
  auto total = permutation + stability + monotone + blindness;
  return {total == 0, std::to_string(kCases) + " cases per suite; violations permutation=" +
                          std::to_string(permutation) + " stability=" + std::to_string(stability) +
                          " monotone=" + std::to_string(monotone) + " label-blindness=" + std::to_string(blindness)};
}

// --- 7 ---------------------------------------------------------------------
// Pre-registered thresholds from tests/oracle/robustness_threshold.py
// (5000 replications, 0.001 quantile, floored to two decimals).
Verdict robustness() {
  auto start = Clock::now();
  const std::vector<std::pair<double, double>> fractions{{0.08, 0.85}, {0.30, 0.99}, {0.60, 1.00}};
  fixture::PlantedSignalConfig config;
  std::mt19937_64 rng(7);
  auto records = fixture::planted_corpus(config, rng);
  std::vector<EvaluationBug> bugs;
  for (std::size_t b = 0; b < 30; ++b) {
    auto planted = fixture::planted_bug(b % 3, config, "bug" + std::to_string(b), rng);
    bugs.push_back({planted.candidates.front().bug_id, {classify_candidates(planted.candidates)}});
  }
  std::vector<SamplePlan> plans;
  for (const auto& [f, threshold] : fractions)
    plans.push_back({format("%.0f%%", f * 100), proportional_sizes(records, f)});
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  auto report = robustness_sweep(records, plans, seeds, bugs, {1});

  bool ok = report.outcomes == bugs.size();
  std::string detail;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    double retention = report.results[i].top1_rate;
    ok &= retention >= fractions[i].second;
    detail += plans[i].name + " " + format("%.4f", retention) + " (>= " + format("%.2f", fractions[i].second) + "), ";
  }
  bool graceful = report.results[2].top1_rate >= report.results[0].top1_rate;
  double elapsed = seconds_since(start);
  return {ok && graceful && elapsed < 300.0,
          detail + "60% >= 8%: " + (graceful ? "yes" : "no") + ", " + format("%.1f s", elapsed)};
}

// --- 8 ---------------------------------------------------------------------
Verdict throughput() {
  fixture::PlantedSignalConfig config;
  std::mt19937_64 rng(8);
  auto model = train(fixture::planted_corpus(config, rng));
  std::vector<std::vector<PatchCandidate>> bugs;
  std::size_t lines = 0, patches = 0;
  for (std::size_t b = 0; b < 1000; ++b) {
    bugs.push_back(fixture::planted_bug(b % 3, config, "bug" + std::to_string(b), rng).candidates);
    for (const auto& c : bugs.back()) lines += split_lines(c.source_pairs.front().before).size();
    patches += bugs.back().size();
  }
  auto start = Clock::now();
  double slowest_bug = 0.0;
  std::size_t ranked = 0;
  for (const auto& bug : bugs) {
    auto t = Clock::now();
    ranked += rank_patches(model, bug).size();
    slowest_bug = std::max(slowest_bug, seconds_since(t));
  }
  double mean_ms = seconds_since(start) * 1000.0 / static_cast<double>(patches);
  return {patches == 10000 && ranked == patches && mean_ms < 100.0,
          std::to_string(patches) + " patches, " + format("%.0f", static_cast<double>(lines) / patches) +
              " lines per source, mean " + format("%.2f ms/patch", mean_ms) + ", slowest 10-patch bug " +
              format("%.1f ms", slowest_bug * 1000.0)};
}

// --- 9 ---------------------------------------------------------------------
Verdict mining() {
  fixture::TempDir dir("fixrank-acceptance");
  fixture::build_miner_repo(FIXRANK_SOURCE_DIR, dir / "demo");
  GitRepository repo(dir / "demo");
  Corpus corpus(dir / "corpus");
  auto summary = mine_repository(repo, "demo", MinerConfig{}, BugClassifier::builtin(), Catalog::builtin(), corpus);
  std::vector<std::string> got;
  for (const auto& r : corpus.load_all()) got.push_back(r.message + " [" + r.category.name() + "]");
  std::sort(got.begin(), got.end());
  std::vector<std::string> expected{"Fix ArrayIndexOutOfBoundsException in Parser.sum [overflow]",
                                    "Fix NPE in Cache.get [null_pointer]",
                                    "fix wrong result of rounding [logic]"};
  return {repo.first_parent_chain("main").size() == 10 && summary.walk.merges_skipped == 2 &&
              summary.walk.pairs == 7 && got == expected,
          std::to_string(summary.walk.pairs) + " pairs, " + std::to_string(summary.walk.merges_skipped) +
              " merges skipped, " + std::to_string(got.size()) + " triples: " + join(got, "; ")};
}

// --- 10 --------------------------------------------------------------------
Verdict model_round_trip() {
  fixture::TempDir dir("fixrank-acceptance");
  std::mt19937_64 rng(10);
  std::size_t models = 0, identical = 0, tampered = 0, rejected = 0;
  auto check = [&](const FrequencyModel& model) {
    ++models;
    auto path = dir / ("m" + std::to_string(models) + ".model");
    save_model(model, path);
    auto loaded = load_model(path);
    save_model(loaded, dir / "again.model");
    identical += loaded == model && read_file(path) == read_file(dir / "again.model");

    auto text = read_file(path);
    std::vector<std::string> edits{text + "logic\tthrow.add\t1\n", text.substr(0, text.size() - 2)};
    std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
    for (int i = 0; i < 50; ++i) {
      auto t = text;
      auto k = pos(rng);
      t[k] = t[k] == '1' ? '2' : '1';
      edits.push_back(t);
    }
    for (const auto& e : edits) {
      if (e == text) continue;
      ++tampered;
      write_file(dir / "tampered.model", e);
      try {
        load_model(dir / "tampered.model");
      } catch (const Error&) {
        ++rejected;
      }
    }
  };
  for (int i = 0; i < 20; ++i)
    check(train(fixture::random_records(std::uniform_int_distribution<std::size_t>(1, 2000)(rng), rng)));
  check(train(fixture::planted_corpus({}, rng)));
  return {identical == models && rejected == tampered,
          std::to_string(identical) + "/" + std::to_string(models) + " byte-identical, " + std::to_string(rejected) +
              "/" + std::to_string(tampered) + " tampered files rejected"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"tie-break order", tie_break},
      {"guard-strengthening fixture", guard_strengthening},
      {"trainer vs naive recount", trainer_oracle},
      {"category estimate", category_estimate},
      {"planted signal end to end", planted_signal},
      {"ranking property suites", ranking_properties},
      {"robustness under sampling", robustness},
      {"ranking throughput", throughput},
      {"mining fixture repository", mining},
      {"model round trip", model_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %2zu: %s  %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}

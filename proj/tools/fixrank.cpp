// fixrank command-line front end: mine | review | train | rank | eval | sample.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixrank/bug_classifier.hpp"
#include "fixrank/catalog.hpp"
#include "fixrank/corpus.hpp"
#include "fixrank/error.hpp"
#include "fixrank/evaluator.hpp"
#include "fixrank/history_miner.hpp"
#include "fixrank/ranker.hpp"
#include "fixrank/review.hpp"
#include "fixrank/text.hpp"
#include "fixrank/trainer.hpp"

namespace {

using namespace fixrank;

struct Common {
  std::string catalog_path;
  std::uint64_t seed = 1;
  bool no_review = false;

  Catalog catalog() const { return catalog_path.empty() ? Catalog::builtin() : Catalog::load(catalog_path); }
};

// "logic=87,overflow=28" -> sizes
std::map<std::string, std::size_t> parse_sizes(const std::string& text) {
  std::map<std::string, std::size_t> sizes;
  for (auto part : split(text, ',')) {
    auto eq = part.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::InvalidArgument, "expected category=size, got '" + std::string(part) + "'");
    try {
      sizes[std::string(trim(part.substr(0, eq)))] = std::stoul(std::string(part.substr(eq + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "bad size in '" + std::string(part) + "'");
    }
  }
  return sizes;
}

std::vector<EvaluationBug> load_bugs(const std::vector<std::string>& manifests, const Catalog& catalog) {
  std::vector<EvaluationBug> bugs;
  for (const auto& path : manifests) {
    auto m = load_manifest(path);
    EvaluationBug bug{m.bug_id, {}};
    for (const auto& tool : m.tools) bug.tools.push_back(classify_candidates(tool, catalog));
    bugs.push_back(std::move(bug));
  }
  return bugs;
}

int cmd_mine(const Common& common, const std::vector<std::string>& repos, const std::string& manifest,
             const std::string& corpus_dir, const std::string& branch, int max_lines, const std::string& patterns,
             const std::string& cache) {
  auto catalog = common.catalog();
  auto classifier = patterns.empty() ? BugClassifier::builtin() : BugClassifier::load(patterns);
  Corpus corpus(corpus_dir);
  std::vector<RepositorySpec> specs;
  for (const auto& r : repos) specs.push_back({r, branch});
  if (!manifest.empty())
    for (auto& s : parse_repository_manifest(read_file(manifest))) specs.push_back(std::move(s));
  if (specs.empty()) fail(ErrorCode::InvalidArgument, "no repositories given");
  MineSummary total;
  for (const auto& spec : specs) {
    MinerConfig config;
    config.branch = spec.branch;
    config.max_changed_lines = max_lines;
    GitRepository repo(materialize_repository(spec, cache.empty() ? corpus.root() / "repos" : std::filesystem::path(cache)));
    auto summary = mine_repository(repo, repository_id(spec.url), config, classifier, catalog, corpus);
    std::cerr << repository_id(spec.url) << ": " << summary.walk.pairs << " pairs, " << summary.walk.merges_skipped
              << " merges skipped, " << summary.accepted << " accepted, " << summary.stored << " stored\n";
    total += summary;
  }
  if (common.no_review) {
    for (auto r : corpus.load_all()) {
      if (r.status != ReviewStatus::Pending) continue;
      r.status = ReviewStatus::Accepted;
      corpus.store(r);
    }
  }
  std::cout << "pairs\t" << total.walk.pairs << "\nmerges_skipped\t" << total.walk.merges_skipped << "\naccepted\t"
            << total.accepted << "\nuncategorized\t" << total.uncategorized << "\nunparseable\t" << total.unparseable
            << "\nstored\t" << total.stored << "\nalready_present\t" << total.already_present << '\n';
  return 0;
}

int cmd_review(const std::string& corpus_dir, const std::string& export_path, const std::string& import_path) {
  Corpus corpus(corpus_dir);
  if (export_path.empty() == import_path.empty())
    fail(ErrorCode::InvalidArgument, "review needs exactly one of --export or --import");
  if (!export_path.empty()) {
    auto n = export_review_queue(corpus, export_path);
    std::cout << "exported\t" << n << '\n';
  } else {
    auto s = import_review_verdicts(corpus, import_path);
    std::cout << "accepted\t" << s.accepted << "\nrejected\t" << s.rejected << "\npending\t" << s.pending << '\n';
  }
  return 0;
}

int cmd_train(const Common& common, const std::string& corpus_dir, const std::string& model_path) {
  auto catalog = common.catalog();
  auto records = training_records(Corpus(corpus_dir).load_all(), common.no_review);
  auto model = train(records, catalog);
  save_model(model, model_path);
  std::cout << "records\t" << records.size() << "\nfingerprint\t" << model.corpus_fingerprint() << '\n';
  for (std::size_t c = 0; c < model.categories().size(); ++c)
    std::cout << "total\t" << model.categories().names()[c] << '\t' << model.total(c) << '\n';
  return 0;
}

int cmd_rank(const Common& common, const std::string& model_path, const std::vector<std::string>& manifests,
             const std::string& out_path) {
  auto catalog = common.catalog();
  auto model = load_model(model_path, catalog);
  std::string out;
  bool header = true;
  for (const auto& path : manifests) {
    auto m = load_manifest(path);
    auto text = format_ranking(rank_cumulative(model, m.tools, catalog));
    if (!header) text = text.substr(text.find('\n') + 1);
    header = false;
    out += text;
  }
  if (out_path.empty())
    std::cout << out;
  else
    write_file(out_path, out);
  return 0;
}

int cmd_eval(const Common& common, const std::string& model_path, const std::vector<std::string>& manifests,
             const std::vector<int>& ks, int min_patches, const std::string& scatter, const std::string& corpus_dir,
             const std::vector<double>& fractions, int repeats) {
  auto catalog = common.catalog();
  auto bugs = load_bugs(manifests, catalog);
  auto outcomes = filter_outcomes(evaluate_bugs(load_model(model_path, catalog), bugs), min_patches);
  std::cout << render_topk_table(outcomes, ks);
  if (!outcomes.empty()) std::cout << '\n' << render_rank_statistics(rank_statistics(outcomes));
  if (!scatter.empty()) scatter_export(outcomes, scatter);
  if (!fractions.empty()) {
    if (corpus_dir.empty()) fail(ErrorCode::InvalidArgument, "--sweep needs --corpus");
    auto records = training_records(Corpus(corpus_dir).load_all(), common.no_review);
    std::vector<SamplePlan> plans;
    for (double f : fractions) {
      char name[32];
      std::snprintf(name, sizeof name, "%g%%", f * 100.0);
      plans.push_back({name, proportional_sizes(records, f)});
    }
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < repeats; ++i) seeds.push_back(common.seed + static_cast<std::uint64_t>(i));
    std::cout << '\n' << render_sweep(robustness_sweep(records, plans, seeds, bugs, ks, catalog));
  }
  return 0;
}

int cmd_sample(const Common& common, const std::string& corpus_dir, const std::string& out_dir,
               const std::string& sizes_text, double fraction) {
  auto records = training_records(Corpus(corpus_dir).load_all(), common.no_review);
  if (sizes_text.empty() == (fraction < 0)) fail(ErrorCode::InvalidArgument, "sample needs exactly one of --sizes or --fraction");
  auto sizes = sizes_text.empty() ? proportional_sizes(records, fraction) : parse_sizes(sizes_text);
  auto sample = stratified_sample(records, sizes, common.seed);
  Corpus out(out_dir);
  for (const auto& r : sample) out.store(r);
  for (const auto& [c, n] : sizes) std::cout << c << '\t' << n << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranks automatically generated patches by historic bug-fix frequencies"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--catalog", common.catalog_path, "Feature catalog file (default: builtin)");
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_flag("--no-review", common.no_review, "Treat every classified record as accepted");
  };

  std::string corpus_dir, model_path, manifest, branch = "HEAD", patterns, cache, out_path, export_path, import_path,
                                              scatter, sizes_text;
  std::vector<std::string> repos, manifests;
  std::vector<int> ks{1, 3, 5, 10};
  std::vector<double> fractions;
  int max_lines = 5, min_patches = 1, repeats = 3;
  double fraction = -1;

  auto* mine = app.add_subcommand("mine", "Extract classified bug-fix triples from git history");
  add_common(mine);
  mine->add_option("repos", repos, "Local repository paths");
  mine->add_option("--manifest", manifest, "File of url<TAB>branch lines");
  mine->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  mine->add_option("--branch", branch, "Branch for positional repositories");
  mine->add_option("--max-lines", max_lines, "Changed-line bound per commit");
  mine->add_option("--patterns", patterns, "Bug category pattern file");
  mine->add_option("--cache", cache, "Clone directory for remote repositories");

  auto* review = app.add_subcommand("review", "Export or import the manual validation queue");
  add_common(review);
  review->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  review->add_option("--export", export_path, "Write pending records to this review file");
  review->add_option("--import", import_path, "Apply verdicts from this review file");

  auto* train_cmd = app.add_subcommand("train", "Count category/kind frequencies over the accepted corpus");
  add_common(train_cmd);
  train_cmd->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  train_cmd->add_option("--model", model_path, "Output model file")->required();

  auto* rank = app.add_subcommand("rank", "Re-rank the candidate patches of one or more bugs");
  add_common(rank);
  rank->add_option("--model", model_path, "Model file")->required();
  rank->add_option("--manifest", manifests, "Per-bug patch manifest (repeatable)")->required();
  rank->add_option("--out", out_path, "Ranking output file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Top-k and rank statistics against the tools' own ordering");
  add_common(eval);
  eval->add_option("--model", model_path, "Model file")->required();
  eval->add_option("--manifest", manifests, "Per-bug patch manifest with labels (repeatable)")->required();
  eval->add_option("--top-k", ks, "k values")->delimiter(',');
  eval->add_option("--min-patches", min_patches, "Skip bugs with fewer candidates");
  eval->add_option("--scatter", scatter, "Write rank-vs-rank plot data");
  eval->add_option("--corpus", corpus_dir, "Corpus for the robustness sweep");
  eval->add_option("--sweep", fractions, "Sample fractions for the robustness sweep")->delimiter(',');
  eval->add_option("--repeats", repeats, "Seeds per sample fraction");

  auto* sample = app.add_subcommand("sample", "Write a stratified sample of the corpus");
  add_common(sample);
  sample->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  sample->add_option("--out", out_path, "Output corpus directory")->required();
  sample->add_option("--sizes", sizes_text, "category=size,...");
  sample->add_option("--fraction", fraction, "Fraction of the corpus, split proportionally");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::InvalidArgument);
  }

  try {
    if (*mine) return cmd_mine(common, repos, manifest, corpus_dir, branch, max_lines, patterns, cache);
    if (*review) return cmd_review(corpus_dir, export_path, import_path);
    if (*train_cmd) return cmd_train(common, corpus_dir, model_path);
    if (*rank) return cmd_rank(common, model_path, manifests, out_path);
    if (*eval)
      return cmd_eval(common, model_path, manifests, ks, min_patches, scatter, corpus_dir, fractions, repeats);
    if (*sample) return cmd_sample(common, corpus_dir, out_path, sizes_text, fraction);
  } catch (const Error& e) {
    std::cerr << "fixrank: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fixrank: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "fixrank/history_miner.hpp"

#include <regex>

#include "fixrank/error.hpp"
#include "fixrank/patch_classifier.hpp"
#include "fixrank/text.hpp"
#include "process.hpp"

namespace fixrank {

namespace {

class KeywordMatcher {
 public:
  explicit KeywordMatcher(const MinerConfig& config) : builtin_(config.bugfix_keywords.empty()) {
    for (const auto& k : config.bugfix_keywords) patterns_.push_back(compile_pattern(k));
  }

  bool operator()(const std::string& message) const {
    if (builtin_) return BugClassifier::builtin().matches_any(message);
    for (const auto& p : patterns_)
      if (std::regex_search(message, p)) return true;
    return false;
  }

 private:
  bool builtin_;
  std::vector<std::regex> patterns_;
};

bool touches_source(const UnifiedDiff& diff, const SourceFilter& filter) {
  for (const auto& f : diff.files)
    if (filter.is_source(f.path())) return true;
  return false;
}

bool passes(const CommitTriple& t, const MinerConfig& config, const KeywordMatcher& is_bug_fix) {
  auto filter = config.source_filter();
  return touches_source(t.diff, filter) && changed_line_count(t.diff, filter) <= config.max_changed_lines &&
         is_bug_fix(t.message);
}

std::string chomp(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

GitRepository::GitRepository(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path_, ec)) fail(ErrorCode::RepoUnreadable, path_.string() + " is not a directory");
  git({"rev-parse", "--git-dir"});
}

std::string GitRepository::git(const std::vector<std::string>& args, ErrorCode on_error) const {
  std::vector<std::string> argv{"git", "-c", "core.quotepath=off", "--no-pager"};
  argv.insert(argv.end(), args.begin(), args.end());
  auto r = detail::run_process(argv, path_);
  if (r.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += ' ' + a;
    fail(on_error, path_.string() + ": git" + cmd + ": " + chomp(r.err));
  }
  return std::move(r.out);
}

std::string GitRepository::resolve(const std::string& branch) const {
  return chomp(git({"rev-parse", "--verify", "--quiet", branch + "^{commit}"}, ErrorCode::BranchMissing));
}

std::vector<std::string> GitRepository::first_parent_chain(const std::string& branch) const {
  auto head = resolve(branch);
  auto listing = git({"rev-list", "--first-parent", "--reverse", head});
  std::vector<std::string> out;
  for (auto line : split_lines(listing))
    if (!trim(line).empty()) out.emplace_back(trim(line));
  return out;
}

std::vector<std::string> GitRepository::parents(const std::string& commit) const {
  auto line = chomp(git({"rev-list", "--parents", "-n", "1", commit}));
  auto fields = split(line, ' ');
  std::vector<std::string> out;
  for (std::size_t i = 1; i < fields.size(); ++i) out.emplace_back(fields[i]);
  return out;
}

std::string GitRepository::message(const std::string& commit) const {
  return chomp(git({"log", "-1", "--format=%B", commit}));
}

std::string GitRepository::diff(const std::string& from, const std::string& to) const {
  return git({"diff", "--no-renames", "--no-color", "--no-ext-diff", "--full-index", from, to});
}

std::string GitRepository::show_file(const std::string& commit, const std::string& file_path) const {
  return git({"show", commit + ":" + file_path});
}

void MinerConfig::validate() const {
  if (max_changed_lines < 1) fail(ErrorCode::InvalidArgument, "max_changed_lines must be at least 1");
  for (const auto& k : bugfix_keywords) compile_pattern(k);
}

WalkStats walk_commit_pairs(const GitRepository& repo, const MinerConfig& config, const std::string& repo_id,
                            const std::function<void(CommitTriple)>& sink) {
  config.validate();
  auto filter = config.source_filter();
  auto chain = repo.first_parent_chain(config.branch);
  WalkStats stats;
  for (std::size_t x = 1; x < chain.size(); ++x) {
    const auto& post = chain[x];
    if (repo.parents(post).size() > 1) {
      ++stats.merges_skipped;
      continue;
    }
    CommitTriple t;
    t.repo_id = repo_id;
    t.pre_commit = chain[x - 1];
    t.post_commit = post;
    t.message = repo.message(post);
    t.diff_text = repo.diff(t.pre_commit, post);
    t.diff = parse_unified_diff(t.diff_text);
    for (const auto& f : t.diff.files)
      if (!f.is_added() && !f.binary && filter.is_source(f.path()))
        t.buggy_source.push_back({f.old_path, repo.show_file(t.pre_commit, f.old_path)});
    ++stats.pairs;
    sink(std::move(t));
  }
  return stats;
}

std::vector<CommitTriple> collect_commit_pairs(const GitRepository& repo, const MinerConfig& config,
                                               const std::string& repo_id, WalkStats* stats) {
  std::vector<CommitTriple> out;
  auto s = walk_commit_pairs(repo, config, repo_id, [&](CommitTriple t) { out.push_back(std::move(t)); });
  if (stats) *stats = s;
  return out;
}

bool filter_triple(const CommitTriple& triple, const MinerConfig& config) {
  return passes(triple, config, KeywordMatcher(config));
}

MineSummary& MineSummary::operator+=(const MineSummary& o) {
  walk.pairs += o.walk.pairs;
  walk.merges_skipped += o.walk.merges_skipped;
  accepted += o.accepted;
  uncategorized += o.uncategorized;
  unparseable += o.unparseable;
  stored += o.stored;
  already_present += o.already_present;
  return *this;
}

MineSummary mine_repository(const GitRepository& repo, const std::string& repo_id, const MinerConfig& config,
                            const BugClassifier& classifier, const Catalog& catalog, const Corpus& corpus) {
  KeywordMatcher is_bug_fix(config);
  auto filter = config.source_filter();
  MineSummary summary;
  summary.walk = walk_commit_pairs(repo, config, repo_id, [&](CommitTriple t) {
    if (!passes(t, config, is_bug_fix)) return;
    ++summary.accepted;
    auto category = classifier.classify(t.message);
    if (!category) {
      ++summary.uncategorized;
      return;
    }
    auto id = t.id();
    if (corpus.contains(id)) {
      ++summary.already_present;
      return;
    }
    auto pairs = source_pairs_from_diff(
        t.diff,
        [&](const std::string& path) {
          for (const auto& s : t.buggy_source)
            if (s.path == path) return s.content;
          fail(ErrorCode::MalformedDiff, "no pre-commit source for " + path);
        },
        filter);
    auto kind = classify_patch_detailed(pairs, catalog);
    if (!kind.parsed()) {
      ++summary.unparseable;
      return;
    }
    CorpusRecord r;
    r.triple_id = id;
    r.repo_id = t.repo_id;
    r.pre_commit = t.pre_commit;
    r.post_commit = t.post_commit;
    r.category = category->category;
    r.status = ReviewStatus::Pending;
    r.catalog_version = catalog.version();
    r.kind = std::move(kind.kind);
    r.message = t.message;
    r.buggy_source = std::move(t.buggy_source);
    r.diff = std::move(t.diff_text);
    corpus.store(r);
    ++summary.stored;
  });
  return summary;
}

std::vector<RepositorySpec> parse_repository_manifest(std::string_view text) {
  std::vector<RepositorySpec> out;
  for (auto line : split_lines(text)) {
    if (trim(line).empty() || starts_with(trim(line), "#")) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty())
      fail(ErrorCode::InvalidArgument, "repository manifest line must be url<TAB>branch: " + std::string(line));
    out.push_back({std::string(trim(fields[0])), std::string(trim(fields[1]))});
  }
  return out;
}

std::string repository_id(std::string_view url) {
  while (!url.empty() && (url.back() == '/' || url.back() == '\\')) url.remove_suffix(1);
  auto slash = url.find_last_of("/:\\");
  auto name = slash == std::string_view::npos ? url : url.substr(slash + 1);
  if (ends_with(name, ".git")) name.remove_suffix(4);
  return name.empty() ? std::string("repo") : std::string(name);
}

std::filesystem::path materialize_repository(const RepositorySpec& spec, const std::filesystem::path& cache_dir) {
  std::error_code ec;
  if (std::filesystem::is_directory(spec.url, ec)) return spec.url;
  auto target = cache_dir / repository_id(spec.url);
  if (std::filesystem::is_directory(target, ec)) return target;
  std::filesystem::create_directories(cache_dir, ec);
  auto r = detail::run_process({"git", "clone", "--quiet", "--no-tags", "--branch", spec.branch, spec.url, target.string()});
  if (r.exit_code != 0) fail(ErrorCode::RepoUnreadable, "clone of " + spec.url + " failed: " + chomp(r.err));
  return target;
}

}  // namespace fixrank

#include "fixrank/unified_diff.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <sstream>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

std::string strip_prefix(std::string_view path) {
  path = trim(path);
  // "--- a/foo.java\t2020-01-01 ..." from diff -u carries a timestamp
  if (auto tab = path.find('\t'); tab != std::string_view::npos) path = path.substr(0, tab);
  if (path == "/dev/null") return {};
  if (starts_with(path, "a/") || starts_with(path, "b/")) path.remove_prefix(2);
  return std::string(path);
}

int parse_int(std::string_view s, std::string_view line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::MalformedDiff, "bad hunk header: " + std::string(line));
  return v;
}

// "-12,3" -> (12, 3); "-12" -> (12, 1)
std::pair<int, int> parse_range(std::string_view s, std::string_view line) {
  s.remove_prefix(1);
  auto comma = s.find(',');
  if (comma == std::string_view::npos) return {parse_int(s, line), 1};
  return {parse_int(s.substr(0, comma), line), parse_int(s.substr(comma + 1), line)};
}

Hunk parse_hunk_header(std::string_view line) {
  // @@ -a,b +c,d @@ optional section
  auto end = line.find("@@", 2);
  if (!starts_with(line, "@@ ") || end == std::string_view::npos)
    fail(ErrorCode::MalformedDiff, "bad hunk header: " + std::string(line));
  auto ranges = split(trim(line.substr(3, end - 3)), ' ');
  if (ranges.size() != 2 || !starts_with(ranges[0], "-") || !starts_with(ranges[1], "+"))
    fail(ErrorCode::MalformedDiff, "bad hunk header: " + std::string(line));
  Hunk h;
  std::tie(h.old_start, h.old_count) = parse_range(ranges[0], line);
  std::tie(h.new_start, h.new_count) = parse_range(ranges[1], line);
  h.section = std::string(trim(line.substr(end + 2)));
  return h;
}

}  // namespace

bool Hunk::old_missing_newline() const {
  return std::any_of(lines.begin(), lines.end(), [](const DiffLine& l) { return l.no_newline && l.op != LineOp::Add; });
}

bool Hunk::new_missing_newline() const {
  return std::any_of(lines.begin(), lines.end(), [](const DiffLine& l) { return l.no_newline && l.op != LineOp::Remove; });
}

UnifiedDiff parse_unified_diff(std::string_view text) {
  UnifiedDiff diff;
  auto lines = split_lines(text);
  FileDiff* file = nullptr;
  std::size_t i = 0;
  auto start_file = [&]() -> FileDiff& {
    diff.files.emplace_back();
    file = &diff.files.back();
    return *file;
  };
  while (i < lines.size()) {
    auto line = lines[i];
    if (starts_with(line, "diff --git ")) {
      auto& f = start_file();
      // fallback names in case there are no ---/+++ lines (binary, mode-only)
      auto rest = line.substr(11);
      auto b = rest.rfind(" b/");
      if (b != std::string_view::npos) {
        f.old_path = strip_prefix(rest.substr(0, b));
        f.new_path = strip_prefix(rest.substr(b + 1));
      }
      ++i;
      continue;
    }
    if (starts_with(line, "--- ") && i + 1 < lines.size() && starts_with(lines[i + 1], "+++ ")) {
      if (!file || !file->hunks.empty() || file->binary) start_file();
      file->old_path = strip_prefix(line.substr(4));
      file->new_path = strip_prefix(lines[i + 1].substr(4));
      i += 2;
      continue;
    }
    if (starts_with(line, "Binary files ")) {
      if (!file) fail(ErrorCode::MalformedDiff, "binary marker outside a file section");
      file->binary = true;
      ++i;
      continue;
    }
    if (starts_with(line, "new file mode")) {
      if (file) file->old_path.clear();
      ++i;
      continue;
    }
    if (starts_with(line, "deleted file mode")) {
      if (file) file->new_path.clear();
      ++i;
      continue;
    }
    if (starts_with(line, "@@")) {
      if (!file) fail(ErrorCode::MalformedDiff, "hunk before any file header");
      Hunk h = parse_hunk_header(line);
      ++i;
      int old_left = h.old_count, new_left = h.new_count;
      LineOp last{};
      while (i < lines.size() && (old_left > 0 || new_left > 0 || starts_with(lines[i], "\\"))) {
        auto body = lines[i];
        if (starts_with(body, "\\")) {
          if (h.lines.empty()) fail(ErrorCode::MalformedDiff, "no-newline marker before any hunk line");
          h.lines.back().no_newline = true;
          ++i;
          continue;
        }
        char tag = body.empty() ? ' ' : body.front();
        std::string content = body.empty() ? std::string() : std::string(body.substr(1));
        if (tag == ' ') {
          last = LineOp::Context;
          --old_left;
          --new_left;
        } else if (tag == '-') {
          last = LineOp::Remove;
          --old_left;
        } else if (tag == '+') {
          last = LineOp::Add;
          --new_left;
        } else {
          break;
        }
        if (old_left < 0 || new_left < 0) fail(ErrorCode::MalformedDiff, "hunk longer than its header declares");
        h.lines.push_back({last, std::move(content), false});
        ++i;
      }
      if (old_left != 0 || new_left != 0) fail(ErrorCode::MalformedDiff, "hunk shorter than its header declares");
      file->hunks.push_back(std::move(h));
      continue;
    }
    // index, mode, similarity, rename and free-form preamble lines
    ++i;
  }
  return diff;
}

std::string to_text(const UnifiedDiff& diff) {
  std::ostringstream out;
  for (const auto& f : diff.files) {
    const auto& a = f.old_path.empty() ? f.new_path : f.old_path;
    const auto& b = f.new_path.empty() ? f.old_path : f.new_path;
    out << "diff --git a/" << a << " b/" << b << '\n';
    if (f.is_added()) out << "new file mode 100644\n";
    if (f.is_deleted()) out << "deleted file mode 100644\n";
    if (f.binary) {
      out << "Binary files differ\n";
      continue;
    }
    out << "--- " << (f.old_path.empty() ? "/dev/null" : "a/" + f.old_path) << '\n';
    out << "+++ " << (f.new_path.empty() ? "/dev/null" : "b/" + f.new_path) << '\n';
    for (const auto& h : f.hunks) {
      out << "@@ -" << h.old_start << ',' << h.old_count << " +" << h.new_start << ',' << h.new_count << " @@";
      if (!h.section.empty()) out << ' ' << h.section;
      out << '\n';
      for (const auto& l : h.lines) {
        out << (l.op == LineOp::Context ? ' ' : l.op == LineOp::Add ? '+' : '-') << l.text << '\n';
        if (l.no_newline) out << "\\ No newline at end of file\n";
      }
    }
  }
  return out.str();
}

std::string apply_file_diff(std::string_view base, const FileDiff& diff) {
  if (diff.binary) fail(ErrorCode::MalformedDiff, "cannot apply a binary diff to " + diff.path());
  auto base_lines = split_lines(base);
  bool final_newline = base.empty() || base.back() == '\n';
  std::vector<std::string> out;
  std::size_t cursor = 0;  // next unread base line (0-based)
  for (const auto& h : diff.hunks) {
    std::size_t start = h.old_count == 0 ? static_cast<std::size_t>(h.old_start)
                                         : static_cast<std::size_t>(std::max(h.old_start - 1, 0));
    if (start < cursor || start > base_lines.size())
      fail(ErrorCode::MalformedDiff, diff.path() + ": hunk @@ -" + std::to_string(h.old_start) + " out of range");
    for (; cursor < start; ++cursor) out.emplace_back(base_lines[cursor]);
    for (const auto& l : h.lines) {
      if (l.op == LineOp::Add) {
        out.push_back(l.text);
        continue;
      }
      if (cursor >= base_lines.size() || base_lines[cursor] != l.text)
        fail(ErrorCode::MalformedDiff, diff.path() + ": context mismatch at line " + std::to_string(cursor + 1));
      if (l.op == LineOp::Context) out.emplace_back(base_lines[cursor]);
      ++cursor;
    }
    if (h.new_missing_newline()) final_newline = false;
    else if (h.old_missing_newline()) final_newline = true;
  }
  for (; cursor < base_lines.size(); ++cursor) out.emplace_back(base_lines[cursor]);
  if (diff.is_added() && !diff.hunks.empty() && !diff.hunks.back().new_missing_newline()) final_newline = true;
  std::string result;
  for (std::size_t i = 0; i < out.size(); ++i) {
    result += out[i];
    if (i + 1 < out.size() || final_newline) result += '\n';
  }
  return result;
}

bool SourceFilter::is_source(std::string_view path) const {
  if (path.empty()) return false;
  bool ext_ok = std::any_of(extensions.begin(), extensions.end(), [&](const auto& e) { return ends_with(path, e); });
  if (!ext_ok) return false;
  std::string p(path);
  return std::none_of(exclude_globs.begin(), exclude_globs.end(),
                      [&](const auto& g) { return fnmatch(g.c_str(), p.c_str(), 0) == 0; });
}

int changed_line_count(const Hunk& hunk) {
  int total = 0;
  int removed = 0, added = 0;
  auto flush = [&] {
    total += std::max(removed, added);
    removed = added = 0;
  };
  for (const auto& l : hunk.lines) {
    switch (l.op) {
      case LineOp::Context:
        flush();
        break;
      case LineOp::Remove:
        if (added > 0) flush();  // a removal after additions starts a new pairing block
        ++removed;
        break;
      case LineOp::Add:
        ++added;
        break;
    }
  }
  flush();
  return total;
}

int changed_line_count(const FileDiff& file) {
  int total = 0;
  for (const auto& h : file.hunks) total += changed_line_count(h);
  return total;
}

int changed_line_count(const UnifiedDiff& diff, const SourceFilter& filter) {
  int total = 0;
  for (const auto& f : diff.files)
    if (filter.is_source(f.path())) total += changed_line_count(f);
  return total;
}

}  // namespace fixrank

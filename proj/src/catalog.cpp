#include "fixrank/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fixrank/error.hpp"
#include "fixrank/text.hpp"

namespace fixrank {

namespace {

// Keep in sync with data/catalog.txt (checked by catalog_test).
constexpr std::string_view kBuiltinCatalog = R"(
catalog-version: 1.0.0
# Feature/modification combinations recognised by the patch classifier.
# One entry per line: feature.modification[.qualifier], sorted.
assertion.add
assertion.modify.predicate_other
assertion.modify.predicate_strengthen
assertion.modify.predicate_weaken
assertion.remove
assignment.add
assignment.modify.expression
assignment.modify.operator
assignment.modify.target
assignment.remove
block_scope.modify
cast.add
cast.modify.type
cast.remove
conditional.add
conditional.add.else_branch
conditional.modify.condition_other
conditional.modify.condition_strengthen
conditional.modify.condition_weaken
conditional.remove
conditional.remove.else_branch
field_declaration.add
field_declaration.add.initialization
field_declaration.modify.initialization
field_declaration.modify.signature
field_declaration.remove
field_declaration.remove.initialization
loop.add
loop.add.break
loop.add.continue
loop.modify.condition_other
loop.modify.condition_strengthen
loop.modify.condition_weaken
loop.modify.initialization
loop.modify.iterable
loop.modify.update
loop.remove
loop.remove.break
loop.remove.continue
method_call.add
method_call.modify.call_arguments
method_call.modify.callee
method_call.remove
method_declaration.add
method_declaration.modify.signature
method_declaration.remove
null_check.add
null_check.remove
return.add
return.modify.returned_value
return.remove
switch.add
switch.add.case
switch.modify.selector
switch.remove
switch.remove.case
synchronized_block.add
synchronized_block.modify.block
synchronized_block.modify.lock_object
synchronized_block.remove
throw.add
throw.modify.expression
throw.remove
try_catch.add
try_catch.add.catch_clause
try_catch.add.finally_clause
try_catch.modify.exception_type
try_catch.remove
try_catch.remove.catch_clause
try_catch.remove.finally_clause
variable_declaration.add
variable_declaration.modify.initialization
variable_declaration.modify.signature
variable_declaration.remove
)";

}  // namespace

std::string_view to_string(Modification m) {
  switch (m) {
    case Modification::Add:
      return "add";
    case Modification::Remove:
      return "remove";
    case Modification::Modify:
      return "modify";
  }
  return "?";
}

std::string FeatureModification::id() const {
  std::string out = feature;
  out += '.';
  out += to_string(modification);
  if (!qualifier.empty()) {
    out += '.';
    out += qualifier;
  }
  return out;
}

std::optional<FeatureModification> FeatureModification::parse(std::string_view id) {
  auto parts = split(id, '.');
  if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
  FeatureModification fm;
  fm.feature = std::string(parts[0]);
  if (parts[1] == "add")
    fm.modification = Modification::Add;
  else if (parts[1] == "remove")
    fm.modification = Modification::Remove;
  else if (parts[1] == "modify")
    fm.modification = Modification::Modify;
  else
    return std::nullopt;
  if (parts.size() == 3) fm.qualifier = std::string(parts[2]);
  auto valid = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
  };
  if (!valid(fm.feature) || (parts.size() == 3 && !valid(fm.qualifier))) return std::nullopt;
  return fm;
}

Catalog::Catalog(std::string version, std::vector<FeatureModification> entries)
    : version_(std::move(version)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.id() < b.id(); });
  ids_.reserve(entries_.size());
  for (const auto& e : entries_) {
    auto id = e.id();
    if (!ids_.empty() && ids_.back() == id) fail(ErrorCode::InvalidArgument, "duplicate catalog entry " + id);
    ids_.push_back(std::move(id));
  }
}

const Catalog& Catalog::builtin() {
  static const Catalog catalog = parse(kBuiltinCatalog);
  return catalog;
}

std::string_view Catalog::builtin_text() { return kBuiltinCatalog.substr(1); }

Catalog Catalog::parse(std::string_view text) {
  std::string version;
  std::vector<FeatureModification> entries;
  std::string previous;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (starts_with(line, "catalog-version:")) {
      version = std::string(trim(line.substr(16)));
      continue;
    }
    if (version.empty()) fail(ErrorCode::InvalidArgument, "catalog: entry before catalog-version header");
    auto fm = FeatureModification::parse(line);
    if (!fm) fail(ErrorCode::UnknownFeature, "catalog: malformed entry '" + std::string(line) + "'");
    auto id = fm->id();
    if (!previous.empty() && !(previous < id))
      fail(ErrorCode::InvalidArgument, "catalog: entries not strictly sorted at '" + id + "'");
    previous = id;
    entries.push_back(std::move(*fm));
  }
  if (version.empty()) fail(ErrorCode::InvalidArgument, "catalog: missing catalog-version header");
  return Catalog(std::move(version), std::move(entries));
}

Catalog Catalog::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string Catalog::serialize() const {
  std::ostringstream out;
  out << "catalog-version: " << version_ << '\n';
  for (const auto& id : ids_) out << id << '\n';
  return out.str();
}

bool Catalog::contains(std::string_view id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

}  // namespace fixrank

#include "fixrank/patch_classifier.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "fixrank/error.hpp"
#include "fixrank/java_parser.hpp"

namespace fixrank {

namespace {

using Id = std::optional<std::string>;

std::string make_id(std::string_view feature, Modification mod, std::string_view qualifier = {}) {
  std::string id(feature);
  id += '.';
  id += to_string(mod);
  if (!qualifier.empty()) {
    id += '.';
    id += qualifier;
  }
  return id;
}

bool is_loop(NodeKind k) {
  return k == NodeKind::While || k == NodeKind::Do || k == NodeKind::For || k == NodeKind::ForEach;
}

bool is_statement(NodeKind k) {
  switch (k) {
    case NodeKind::LocalVar:
    case NodeKind::ExprStmt:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::Do:
    case NodeKind::For:
    case NodeKind::ForEach:
    case NodeKind::Try:
    case NodeKind::Synchronized:
    case NodeKind::Return:
    case NodeKind::Throw:
    case NodeKind::Break:
    case NodeKind::Continue:
    case NodeKind::Assert:
    case NodeKind::Switch:
    case NodeKind::Labeled:
    case NodeKind::Empty:
    case NodeKind::Yield:
    case NodeKind::Block:
    case NodeKind::FieldDecl:
    case NodeKind::MethodDecl:
    case NodeKind::CtorDecl:
    case NodeKind::ClassDecl:
    case NodeKind::InitializerBlock:
      return true;
    default:
      return false;
  }
}

// Containers that carry no feature of their own; edits beneath an inserted
// or deleted one are attributed as if it were not there.
bool is_transparent(NodeKind k) { return k == NodeKind::Block || k == NodeKind::Then; }

NodeId child_of_kind(const SyntaxTree& t, NodeId n, NodeKind k) {
  for (auto c : t.node(n).children)
    if (t.kind(c) == k) return c;
  return kNoNode;
}

bool compares_with_null(const SyntaxTree& t, NodeId n) {
  for (NodeId i = n; i <= t.last_descendant(n); ++i) {
    if (t.kind(i) != NodeKind::Binary || (t.value(i) != "==" && t.value(i) != "!=")) continue;
    for (auto c : t.node(i).children)
      if (t.kind(c) == NodeKind::Literal && t.value(c) == "null") return true;
  }
  return false;
}

// One side of the diff with a view of its counterpart.
struct Side {
  const SyntaxTree& tree;
  const SyntaxTree& other;
  const Mapping& mapping;
  bool is_before;

  NodeId partner(NodeId n) const { return is_before ? mapping.after_of(n) : mapping.before_of(n); }
  bool matched(NodeId n) const { return partner(n) != kNoNode; }
};

void flatten(const SyntaxTree& t, NodeId n, std::string_view op, std::vector<std::string>& out) {
  if (t.kind(n) == NodeKind::Binary && t.value(n) == op) {
    for (auto c : t.node(n).children) flatten(t, c, op, out);
    return;
  }
  out.push_back(t.render(n));
}

std::vector<std::string> operands(const SyntaxTree& t, NodeId n, std::string_view op) {
  std::vector<std::string> out;
  flatten(t, n, op, out);
  std::sort(out.begin(), out.end());
  return out;
}

// a is a strict sub-multiset of b
bool strict_subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

class Detector {
 public:
  Detector(const SyntaxTree& before, const SyntaxTree& after, const EditScript& script, const ClassifierOptions& options)
      : before_{before, after, script.mapping, true},
        after_{after, before, script.mapping, false},
        script_(script),
        options_(options) {}

  std::vector<std::string> run() {
    for (const auto& e : script_.edits) {
      switch (e.action) {
        case EditAction::Insert:
          if (is_subtree_root(after_, e.after_node)) added_or_removed(after_, e.after_node, Modification::Add);
          break;
        case EditAction::Delete:
          if (is_subtree_root(before_, e.before_node)) added_or_removed(before_, e.before_node, Modification::Remove);
          break;
        case EditAction::Update:
          updated(e.before_node, e.after_node);
          break;
        case EditAction::Move:
          moved(e.before_node, e.after_node);
          break;
      }
    }
    return std::move(out_);
  }

 private:
  const Side before_;
  const Side after_;
  const EditScript& script_;
  const ClassifierOptions& options_;
  std::vector<std::string> out_;

  void emit(Id id) {
    if (id) out_.push_back(std::move(*id));
  }

  bool is_subtree_root(const Side& s, NodeId n) const {
    auto p = s.tree.parent(n);
    if (p == kNoNode || s.matched(p)) return true;
    return is_transparent(s.tree.kind(p)) && is_subtree_root(s, p);
  }

  // Feature of a whole inserted or deleted node, if it denotes one.
  std::vector<std::string> node_features(const Side& s, NodeId n, Modification mod) const {
    const auto& t = s.tree;
    auto owner = t.parent(n);
    switch (t.kind(n)) {
      case NodeKind::If: {
        auto cond = child_of_kind(t, n, NodeKind::Condition);
        if (cond != kNoNode && compares_with_null(t, cond)) {
          if (options_.collapse_null_check) return {make_id("null_check", mod)};
          return {make_id("null_check", mod), make_id("conditional", mod)};
        }
        return {make_id("conditional", mod)};
      }
      case NodeKind::While:
      case NodeKind::Do:
      case NodeKind::For:
      case NodeKind::ForEach:
        return {make_id("loop", mod)};
      case NodeKind::Break:
        return {make_id("loop", mod, "break")};
      case NodeKind::Continue:
        return {make_id("loop", mod, "continue")};
      case NodeKind::Return:
        return {make_id("return", mod)};
      case NodeKind::Throw:
        return {make_id("throw", mod)};
      case NodeKind::Try:
        return {make_id("try_catch", mod)};
      case NodeKind::Catch:
        return {make_id("try_catch", mod, "catch_clause")};
      case NodeKind::Finally:
        return {make_id("try_catch", mod, "finally_clause")};
      case NodeKind::Else:
        return {make_id("conditional", mod, "else_branch")};
      case NodeKind::Synchronized:
        return {make_id("synchronized_block", mod)};
      case NodeKind::Assert:
        return {make_id("assertion", mod)};
      case NodeKind::FieldDecl:
        return {make_id("field_declaration", mod)};
      case NodeKind::MethodDecl:
      case NodeKind::CtorDecl:
        return {make_id("method_declaration", mod)};
      case NodeKind::LocalVar:
        return {make_id("variable_declaration", mod)};
      case NodeKind::Declarator:
        if (owner != kNoNode && t.kind(owner) == NodeKind::FieldDecl) return {make_id("field_declaration", mod)};
        if (owner != kNoNode && t.kind(owner) == NodeKind::LocalVar) return {make_id("variable_declaration", mod)};
        return {};
      case NodeKind::Initializer: {
        auto decl = owner == kNoNode ? kNoNode : t.parent(owner);
        if (decl == kNoNode || t.kind(owner) != NodeKind::Declarator) return {};
        if (t.kind(decl) == NodeKind::FieldDecl) return {make_id("field_declaration", mod, "initialization")};
        if (t.kind(decl) == NodeKind::LocalVar) return {make_id("variable_declaration", Modification::Modify, "initialization")};
        return {};
      }
      case NodeKind::Switch:
        return {make_id("switch", mod)};
      case NodeKind::Case:
        return {make_id("switch", mod, "case")};
      case NodeKind::Labeled:
        return t.node(n).children.empty() ? std::vector<std::string>{}
                                          : node_features(s, t.node(n).children.front(), mod);
      case NodeKind::ExprStmt: {
        if (t.node(n).children.empty()) return {};
        auto e = t.node(n).children.front();
        switch (t.kind(e)) {
          case NodeKind::Assign:
            return {make_id("assignment", mod)};
          case NodeKind::Unary:
            if (t.value(e).find("++") != std::string::npos || t.value(e).find("--") != std::string::npos)
              return {make_id("assignment", mod)};
            return {};
          case NodeKind::MethodCall:
          case NodeKind::New:
            return {make_id("method_call", mod)};
          default:
            return {};
        }
      }
      case NodeKind::Cast:
        return {make_id("cast", mod)};
      case NodeKind::Condition:
        // a for loop gaining or losing its condition
        if (owner != kNoNode && is_loop(t.kind(owner)) && s.matched(owner))
          return {make_id("loop", Modification::Modify, "condition_other")};
        return {};
      default:
        return {};
    }
  }

  void added_or_removed(const Side& s, NodeId n, Modification mod) {
    auto features = node_features(s, n, mod);
    if (!features.empty()) {
      for (auto& f : features) out_.push_back(std::move(f));
      return;
    }
    if (is_statement(s.tree.kind(n)) || is_transparent(s.tree.kind(n))) return;
    Id id = context(s, n);
    if (!id && (s.tree.kind(n) == NodeKind::MethodCall || s.tree.kind(n) == NodeKind::New))
      id = make_id("method_call", mod);
    emit(std::move(id));
  }

  Id condition_change(const Side& s, NodeId condition, std::string_view feature, std::string_view prefix) const {
    auto owner = s.tree.parent(condition);
    auto other_owner = s.partner(owner);
    if (other_owner == kNoNode) return std::nullopt;
    auto other_cond = child_of_kind(s.other, other_owner, NodeKind::Condition);
    std::string qualifier(prefix);
    if (other_cond == kNoNode || s.tree.node(condition).children.empty() ||
        s.other.node(other_cond).children.empty()) {
      qualifier += "other";
    } else {
      auto here = s.tree.node(condition).children.front();
      auto there = s.other.node(other_cond).children.front();
      auto change = s.is_before ? analyze_condition_change(s.tree, here, s.other, there)
                                : analyze_condition_change(s.other, there, s.tree, here);
      qualifier += to_string(change);
    }
    return make_id(feature, Modification::Modify, qualifier);
  }

  Id predicate_change(const Side& s, NodeId predicate) const {
    auto owner = s.tree.parent(predicate);
    auto other_owner = s.partner(owner);
    if (other_owner == kNoNode) return std::nullopt;
    auto other_pred = child_of_kind(s.other, other_owner, NodeKind::Predicate);
    std::string qualifier = "predicate_";
    if (other_pred == kNoNode || s.other.node(other_pred).children.empty() ||
        s.tree.node(predicate).children.empty()) {
      qualifier += "other";
    } else {
      auto here = s.tree.node(predicate).children.front();
      auto there = s.other.node(other_pred).children.front();
      auto change = s.is_before ? analyze_condition_change(s.tree, here, s.other, there)
                                : analyze_condition_change(s.other, there, s.tree, here);
      qualifier += to_string(change);
    }
    return make_id("assertion", Modification::Modify, qualifier);
  }

  // Nearest enclosing component of `n` that the catalog can describe. Stops at
  // statement boundaries. The component's owner must exist on both sides.
  static bool for_init(const SyntaxTree& t, NodeId n) {
    return t.parent(n) != kNoNode && t.kind(t.parent(n)) == NodeKind::ForInit;
  }

  Id context(const Side& s, NodeId n) const {
    const auto& t = s.tree;
    NodeId child = n;
    for (NodeId a = t.parent(n); a != kNoNode; child = a, a = t.parent(a)) {
      auto owner = t.parent(a);
      auto owned = [&](Id id) -> Id {
        if (owner == kNoNode || !s.matched(owner)) return std::nullopt;
        return id;
      };
      switch (t.kind(a)) {
        case NodeKind::Condition:
          if (owner == kNoNode) return std::nullopt;
          if (t.kind(owner) == NodeKind::If) return condition_change(s, a, "conditional", "condition_");
          if (is_loop(t.kind(owner))) return condition_change(s, a, "loop", "condition_");
          return std::nullopt;
        case NodeKind::Predicate:
          return predicate_change(s, a);
        case NodeKind::Message:
          return std::nullopt;
        case NodeKind::ForInit:
        case NodeKind::ForVar:
          return owned(make_id("loop", Modification::Modify, "initialization"));
        case NodeKind::ForUpdate:
          return owned(make_id("loop", Modification::Modify, "update"));
        case NodeKind::Iterable:
          return owned(make_id("loop", Modification::Modify, "iterable"));
        case NodeKind::Arguments:
          if (owner != kNoNode && (t.kind(owner) == NodeKind::MethodCall || t.kind(owner) == NodeKind::New))
            return owned(make_id("method_call", Modification::Modify, "call_arguments"));
          return std::nullopt;
        case NodeKind::MethodCall:
          if (!s.matched(a)) return std::nullopt;
          return make_id("method_call", Modification::Modify, "callee");
        case NodeKind::New:
          if (t.kind(child) == NodeKind::ClassBody) return std::nullopt;
          if (!s.matched(a)) return std::nullopt;
          return make_id("method_call", Modification::Modify, "callee");
        case NodeKind::Assign:
          if (!s.matched(a)) return std::nullopt;
          return make_id("assignment", Modification::Modify,
                         t.position_in_parent(child) == 0 ? "target" : "expression");
        case NodeKind::Unary:
          if (t.value(a).find("++") != std::string::npos || t.value(a).find("--") != std::string::npos) {
            if (!s.matched(a)) return std::nullopt;
            return make_id("assignment", Modification::Modify, "target");
          }
          break;
        case NodeKind::Initializer: {
          if (owner == kNoNode || t.kind(owner) != NodeKind::Declarator) return std::nullopt;
          auto decl = t.parent(owner);
          if (decl == kNoNode || !s.matched(owner)) return std::nullopt;
          if (t.kind(decl) == NodeKind::FieldDecl)
            return make_id("field_declaration", Modification::Modify, "initialization");
          // loop variables belong to the loop header
          if (t.kind(decl) == NodeKind::LocalVar && for_init(t, decl)) break;
          if (t.kind(decl) == NodeKind::LocalVar)
            return make_id("variable_declaration", Modification::Modify, "initialization");
          return std::nullopt;
        }
        case NodeKind::FieldDecl:
          if (!s.matched(a)) return std::nullopt;
          return make_id("field_declaration", Modification::Modify, "signature");
        case NodeKind::LocalVar:
          if (for_init(t, a)) break;
          if (!s.matched(a)) return std::nullopt;
          return make_id("variable_declaration", Modification::Modify, "signature");
        case NodeKind::MethodDecl:
        case NodeKind::CtorDecl:
          if (t.kind(child) == NodeKind::Block || !s.matched(a)) return std::nullopt;
          return make_id("method_declaration", Modification::Modify, "signature");
        case NodeKind::Return:
          if (!s.matched(a)) return std::nullopt;
          return make_id("return", Modification::Modify, "returned_value");
        case NodeKind::Throw:
          if (!s.matched(a)) return std::nullopt;
          return make_id("throw", Modification::Modify, "expression");
        case NodeKind::CatchParam:
          return owned(make_id("try_catch", Modification::Modify, "exception_type"));
        case NodeKind::Lock:
          return owned(make_id("synchronized_block", Modification::Modify, "lock_object"));
        case NodeKind::Selector:
          return owned(make_id("switch", Modification::Modify, "selector"));
        case NodeKind::Cast:
        case NodeKind::Declarator:
        case NodeKind::Parameters:
        case NodeKind::Parameter:
        case NodeKind::Throws:
        case NodeKind::TypeParams:
        case NodeKind::Modifiers:
        case NodeKind::TypeRef:
          break;
        default:
          if (is_statement(t.kind(a)) || is_transparent(t.kind(a))) return std::nullopt;
          switch (t.kind(a)) {
            case NodeKind::Else:
            case NodeKind::Case:
            case NodeKind::Catch:
            case NodeKind::Finally:
            case NodeKind::Resources:
            case NodeKind::ClassBody:
            case NodeKind::CompilationUnit:
            case NodeKind::EnumConstant:
            case NodeKind::Supertypes:
            case NodeKind::Package:
            case NodeKind::Import:
              return std::nullopt;
            default:
              break;
          }
      }
    }
    return std::nullopt;
  }

  void updated(NodeId b, NodeId x) {
    const auto& t = after_.tree;
    auto owner = t.parent(x);
    switch (t.kind(x)) {
      case NodeKind::MethodCall:
        emit(make_id("method_call", Modification::Modify, "callee"));
        return;
      case NodeKind::Assign:
        emit(make_id("assignment", Modification::Modify, "operator"));
        return;
      case NodeKind::Declarator:
        if (owner != kNoNode && t.kind(owner) == NodeKind::FieldDecl)
          emit(make_id("field_declaration", Modification::Modify, "signature"));
        else if (owner != kNoNode && t.kind(owner) == NodeKind::LocalVar)
          emit(make_id("variable_declaration", Modification::Modify, "signature"));
        return;
      case NodeKind::MethodDecl:
      case NodeKind::CtorDecl:
        emit(make_id("method_declaration", Modification::Modify, "signature"));
        return;
      case NodeKind::Cast:
        emit(make_id("cast", Modification::Modify, "type"));
        return;
      case NodeKind::New: {
        Id id = context(after_, x);
        emit(id ? std::move(id) : make_id("method_call", Modification::Modify, "callee"));
        return;
      }
      default:
        break;
    }
    Id id = context(after_, x);
    if (!id) id = context(before_, b);
    emit(std::move(id));
  }

  NodeId effective_parent(const SyntaxTree& t, NodeId n) const {
    auto p = t.parent(n);
    while (p != kNoNode && t.kind(p) == NodeKind::Block) p = t.parent(p);
    return p;
  }

  static bool bare_block(const SyntaxTree& t, NodeId n) {
    return t.kind(n) == NodeKind::Block && t.parent(n) != kNoNode && t.kind(t.parent(n)) == NodeKind::Block;
  }

  void moved(NodeId w, NodeId x) {
    const auto& t1 = before_.tree;
    const auto& t2 = after_.tree;
    if (!is_statement(t2.kind(x))) {
      // carried along by an inserted or deleted parent, which is classified itself
      if (!before_.matched(t1.parent(w)) || !after_.matched(t2.parent(x))) return;
      Id id = context(after_, x);
      if (!id) id = context(before_, w);
      emit(std::move(id));
      return;
    }
    // a block matched across a change of nesting depth
    if (t2.kind(x) == NodeKind::Block && bare_block(t1, w) != bare_block(t2, x)) {
      emit(make_id("block_scope", Modification::Modify));
      return;
    }
    auto p1 = effective_parent(t1, w);
    auto p2 = effective_parent(t2, x);
    bool p1_kept = p1 == kNoNode || before_.matched(p1);
    bool p2_kept = p2 == kNoNode || after_.matched(p2);
    if (!p1_kept || !p2_kept) {
      emit(make_id("block_scope", Modification::Modify));
      return;
    }
    bool same_container = (p1 == kNoNode && p2 == kNoNode) || (p1 != kNoNode && before_.partner(p1) == p2);
    // Braces added or dropped around an unchanged statement list: a scope
    // change only when the block nests directly inside another block.
    if (same_container) {
      auto q1 = t1.parent(w);
      auto q2 = t2.parent(x);
      bool nested1 = !before_.matched(q1) && bare_block(t1, q1);
      bool nested2 = !after_.matched(q2) && bare_block(t2, q2);
      if (nested1 || nested2) {
        emit(make_id("block_scope", Modification::Modify));
        return;
      }
      if (!before_.matched(q1) || !after_.matched(q2)) return;
    }
    bool into_sync = p2 != kNoNode && t2.kind(p2) == NodeKind::Synchronized;
    bool out_of_sync = p1 != kNoNode && t1.kind(p1) == NodeKind::Synchronized;
    if ((into_sync || out_of_sync) && !same_container) {
      emit(make_id("synchronized_block", Modification::Modify, "block"));
      return;
    }
    for (auto& f : node_features(before_, w, Modification::Remove)) out_.push_back(std::move(f));
    for (auto& f : node_features(after_, x, Modification::Add)) out_.push_back(std::move(f));
  }
};

SyntaxTree parse_source(const std::string& source, const std::string& language) {
  if (language != "java") fail(ErrorCode::InvalidArgument, "unsupported object language: " + language);
  return parse_java(source, ParseMode::Auto);
}

}  // namespace

std::string_view to_string(ConditionChange change) {
  switch (change) {
    case ConditionChange::Strengthen:
      return "strengthen";
    case ConditionChange::Weaken:
      return "weaken";
    case ConditionChange::Other:
      return "other";
  }
  return "other";
}

ConditionChange analyze_condition_change(const SyntaxTree& before, NodeId before_expr, const SyntaxTree& after,
                                         NodeId after_expr) {
  auto c1 = operands(before, before_expr, "&&");
  auto c2 = operands(after, after_expr, "&&");
  auto d1 = operands(before, before_expr, "||");
  auto d2 = operands(after, after_expr, "||");
  if (strict_subset(c1, c2) || strict_subset(d2, d1)) return ConditionChange::Strengthen;
  if (strict_subset(d1, d2) || strict_subset(c2, c1)) return ConditionChange::Weaken;
  return ConditionChange::Other;
}

PatchKind detect_feature_modifications(const SyntaxTree& before, const SyntaxTree& after, const EditScript& script,
                                       const Catalog& catalog, const ClassifierOptions& options) {
  PatchKind kind;
  for (auto& id : Detector(before, after, script, options).run())
    if (catalog.contains(id)) kind.insert(std::move(id));
  return kind;
}

PatchClassification classify_patch_detailed(const std::vector<SourcePair>& pairs, const Catalog& catalog,
                                            const ClassifierOptions& options) {
  PatchClassification result;
  for (const auto& pair : pairs) {
    SyntaxTree before, after;
    try {
      before = parse_source(pair.before, pair.language);
      after = parse_source(pair.after, pair.language);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unparseable) throw;
      result.diagnostics.push_back((pair.file_path.empty() ? std::string("<source>") : pair.file_path) + ": " +
                                   e.what());
      continue;
    }
    auto script = diff_trees(before, after);
    result.kind.merge(detect_feature_modifications(before, after, script, catalog, options));
    ++result.parsed_pairs;
  }
  return result;
}

PatchKind classify_patch(const std::vector<SourcePair>& pairs, const Catalog& catalog,
                         const ClassifierOptions& options) {
  auto result = classify_patch_detailed(pairs, catalog, options);
  if (!result.parsed()) {
    std::string why = result.diagnostics.empty() ? "patch touches no source file" : result.diagnostics.front();
    fail(ErrorCode::Unparseable, why);
  }
  return std::move(result.kind);
}

std::vector<PatchClassification> classify_batch_serial(const std::vector<std::vector<SourcePair>>& patches,
                                                       const Catalog& catalog, const ClassifierOptions& options) {
  std::vector<PatchClassification> out;
  out.reserve(patches.size());
  for (const auto& p : patches) out.push_back(classify_patch_detailed(p, catalog, options));
  return out;
}

std::vector<PatchClassification> classify_batch(const std::vector<std::vector<SourcePair>>& patches,
                                                const Catalog& catalog, const ClassifierOptions& options) {
  std::vector<PatchClassification> out(patches.size());
  std::vector<std::exception_ptr> errors(patches.size());
  const auto n = static_cast<std::ptrdiff_t>(patches.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      out[k] = classify_patch_detailed(patches[k], catalog, options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<SourcePair> source_pairs_from_diff(const UnifiedDiff& diff,
                                               const std::function<std::string(const std::string&)>& read_base,
                                               const SourceFilter& filter) {
  std::vector<SourcePair> pairs;
  for (const auto& f : diff.files) {
    if (f.binary || !filter.is_source(f.path())) continue;
    SourcePair p;
    p.file_path = f.path();
    if (!f.is_added()) p.before = read_base(f.old_path);
    p.after = f.is_deleted() ? std::string() : apply_file_diff(p.before, f);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace fixrank

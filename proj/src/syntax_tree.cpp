#include "fixrank/syntax_tree.hpp"

#include <algorithm>
#include <functional>

namespace fixrank {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
#define FIXRANK_KIND(k) \
  case NodeKind::k:     \
    return #k;
    FIXRANK_KIND(CompilationUnit)
    FIXRANK_KIND(Package)
    FIXRANK_KIND(Import)
    FIXRANK_KIND(ClassDecl)
    FIXRANK_KIND(ClassBody)
    FIXRANK_KIND(EnumConstant)
    FIXRANK_KIND(Modifiers)
    FIXRANK_KIND(TypeRef)
    FIXRANK_KIND(TypeParams)
    FIXRANK_KIND(Supertypes)
    FIXRANK_KIND(FieldDecl)
    FIXRANK_KIND(Declarator)
    FIXRANK_KIND(Initializer)
    FIXRANK_KIND(MethodDecl)
    FIXRANK_KIND(CtorDecl)
    FIXRANK_KIND(Parameters)
    FIXRANK_KIND(Parameter)
    FIXRANK_KIND(Throws)
    FIXRANK_KIND(InitializerBlock)
    FIXRANK_KIND(Block)
    FIXRANK_KIND(LocalVar)
    FIXRANK_KIND(ExprStmt)
    FIXRANK_KIND(If)
    FIXRANK_KIND(Condition)
    FIXRANK_KIND(Then)
    FIXRANK_KIND(Else)
    FIXRANK_KIND(While)
    FIXRANK_KIND(Do)
    FIXRANK_KIND(For)
    FIXRANK_KIND(ForInit)
    FIXRANK_KIND(ForUpdate)
    FIXRANK_KIND(ForEach)
    FIXRANK_KIND(ForVar)
    FIXRANK_KIND(Iterable)
    FIXRANK_KIND(Try)
    FIXRANK_KIND(Resources)
    FIXRANK_KIND(Catch)
    FIXRANK_KIND(CatchParam)
    FIXRANK_KIND(Finally)
    FIXRANK_KIND(Synchronized)
    FIXRANK_KIND(Lock)
    FIXRANK_KIND(Return)
    FIXRANK_KIND(Throw)
    FIXRANK_KIND(Break)
    FIXRANK_KIND(Continue)
    FIXRANK_KIND(Assert)
    FIXRANK_KIND(Predicate)
    FIXRANK_KIND(Message)
    FIXRANK_KIND(Switch)
    FIXRANK_KIND(Selector)
    FIXRANK_KIND(Case)
    FIXRANK_KIND(Labeled)
    FIXRANK_KIND(Empty)
    FIXRANK_KIND(Yield)
    FIXRANK_KIND(Assign)
    FIXRANK_KIND(Ternary)
    FIXRANK_KIND(Binary)
    FIXRANK_KIND(InstanceOf)
    FIXRANK_KIND(Unary)
    FIXRANK_KIND(Cast)
    FIXRANK_KIND(MethodCall)
    FIXRANK_KIND(Arguments)
    FIXRANK_KIND(FieldAccess)
    FIXRANK_KIND(Name)
    FIXRANK_KIND(Literal)
    FIXRANK_KIND(ArrayAccess)
    FIXRANK_KIND(New)
    FIXRANK_KIND(NewArray)
    FIXRANK_KIND(ArrayInit)
    FIXRANK_KIND(Lambda)
    FIXRANK_KIND(MethodRef)
#undef FIXRANK_KIND
  }
  return "?";
}

int SyntaxTree::position_in_parent(NodeId id) const {
  auto p = parent(id);
  if (p == kNoNode) return 0;
  const auto& siblings = node(p).children;
  return static_cast<int>(std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
}

bool SyntaxTree::isomorphic(NodeId a, const SyntaxTree& other, NodeId b) const {
  const Node& x = node(a);
  const Node& y = other.node(b);
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size || x.value != y.value ||
      x.children.size() != y.children.size())
    return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!isomorphic(x.children[i], other, y.children[i])) return false;
  return true;
}

std::string SyntaxTree::render(NodeId id) const {
  const Node& n = node(id);
  std::string out = "(";
  out += to_string(n.kind);
  if (!n.value.empty()) {
    out += ':';
    out += n.value;
  }
  for (NodeId c : n.children) {
    out += ' ';
    out += render(c);
  }
  out += ')';
  return out;
}

NodeId SyntaxTree::add(NodeKind kind, std::string value, SourceSpan span) {
  Node n;
  n.kind = kind;
  n.value = std::move(value);
  n.span = span;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void SyntaxTree::attach(NodeId parent, NodeId child) {
  nodes_[static_cast<std::size_t>(child)].parent = parent;
  nodes_[static_cast<std::size_t>(parent)].children.push_back(child);
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // boost::hash_combine, widened
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4));
}

}  // namespace

void SyntaxTree::finalize(NodeId root) {
  // Renumber reachable nodes in pre-order.
  std::vector<Node> ordered;
  ordered.reserve(nodes_.size());
  std::vector<std::pair<NodeId, NodeId>> stack{{root, kNoNode}};
  while (!stack.empty()) {
    auto [old_id, new_parent] = stack.back();
    stack.pop_back();
    Node n = std::move(nodes_[static_cast<std::size_t>(old_id)]);
    auto kids = std::move(n.children);
    n.children.clear();
    n.parent = new_parent;
    auto new_id = static_cast<NodeId>(ordered.size());
    if (new_parent != kNoNode) ordered[static_cast<std::size_t>(new_parent)].children.push_back(new_id);
    ordered.push_back(std::move(n));
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, new_id);
  }
  nodes_ = std::move(ordered);
  // Children have larger ids than parents, so a reverse sweep is post-order enough.
  std::hash<std::string> hs;
  for (auto i = static_cast<NodeId>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    n.height = 1;
    n.size = 1;
    std::uint64_t h = mix(static_cast<std::uint64_t>(n.kind) + 1, hs(n.value));
    for (NodeId c : n.children) {
      const Node& cn = nodes_[static_cast<std::size_t>(c)];
      n.height = std::max(n.height, cn.height + 1);
      n.size += cn.size;
      h = mix(h, cn.hash);
    }
    n.hash = mix(h, n.children.size());
  }
}

SyntaxTree SyntaxTree::from_nodes(std::vector<Node> nodes, NodeId root) {
  SyntaxTree t;
  t.nodes_ = std::move(nodes);
  t.finalize(root);
  return t;
}

}  // namespace fixrank

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fixrank {

enum class NodeKind : std::uint8_t {
  // declarations
  CompilationUnit,
  Package,
  Import,
  ClassDecl,
  ClassBody,
  EnumConstant,
  Modifiers,
  TypeRef,
  TypeParams,
  Supertypes,
  FieldDecl,
  Declarator,
  Initializer,
  MethodDecl,
  CtorDecl,
  Parameters,
  Parameter,
  Throws,
  InitializerBlock,
  // statements
  Block,
  LocalVar,
  ExprStmt,
  If,
  Condition,
  Then,
  Else,
  While,
  Do,
  For,
  ForInit,
  ForUpdate,
  ForEach,
  ForVar,
  Iterable,
  Try,
  Resources,
  Catch,
  CatchParam,
  Finally,
  Synchronized,
  Lock,
  Return,
  Throw,
  Break,
  Continue,
  Assert,
  Predicate,
  Message,
  Switch,
  Selector,
  Case,
  Labeled,
  Empty,
  Yield,
  // expressions
  Assign,
  Ternary,
  Binary,
  InstanceOf,
  Unary,
  Cast,
  MethodCall,
  Arguments,
  FieldAccess,
  Name,
  Literal,
  ArrayAccess,
  New,
  NewArray,
  ArrayInit,
  Lambda,
  MethodRef,
};

std::string_view to_string(NodeKind kind);

/// Index into SyntaxTree::nodes. Pre-order numbering: a node's descendants
/// occupy the contiguous range (id, rightmost_descendant].
using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct SourceSpan {
  std::uint32_t begin = 0;  // byte offsets into the source
  std::uint32_t end = 0;
};

struct Node {
  NodeKind kind{};
  std::string value;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  SourceSpan span;
  // derived by SyntaxTree::finalize()
  int height = 1;
  int size = 1;
  std::uint64_t hash = 0;  // structural hash of the subtree (kind, value, children)
};

class SyntaxTree {
 public:
  NodeId root() const noexcept { return nodes_.empty() ? kNoNode : 0; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  NodeId parent(NodeId id) const { return node(id).parent; }
  NodeKind kind(NodeId id) const { return node(id).kind; }
  const std::string& value(NodeId id) const { return node(id).value; }
  NodeId last_descendant(NodeId id) const { return id + node(id).size - 1; }
  bool is_descendant(NodeId id, NodeId ancestor) const { return id > ancestor && id <= last_descendant(ancestor); }
  int position_in_parent(NodeId id) const;

  bool isomorphic(NodeId a, const SyntaxTree& other, NodeId b) const;

  /// S-expression rendering of a subtree, e.g. (Binary:&& (Name:a) (Name:b)).
  std::string render(NodeId id) const;
  std::string render() const { return nodes_.empty() ? std::string() : render(root()); }

  /// Builds a tree from parent-linked nodes in arbitrary order, renumbering to
  /// pre-order and computing heights, sizes and hashes.
  static SyntaxTree from_nodes(std::vector<Node> nodes, NodeId root);

  // Build interface used by the parser.
  NodeId add(NodeKind kind, std::string value, SourceSpan span);
  void attach(NodeId parent, NodeId child);
  void set_span(NodeId id, SourceSpan span) { nodes_[static_cast<std::size_t>(id)].span = span; }
  void set_value(NodeId id, std::string value) { nodes_[static_cast<std::size_t>(id)].value = std::move(value); }
  void finalize(NodeId root);

 private:
  std::vector<Node> nodes_;
};

}  // namespace fixrank

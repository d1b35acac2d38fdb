#pragma once

#include <string>
#include <vector>

#include "fixrank/syntax_tree.hpp"

namespace fixrank {

/// One-to-one node correspondence between a before and an after tree.
class Mapping {
 public:
  Mapping() = default;
  Mapping(std::size_t before_size, std::size_t after_size)
      : to_after_(before_size, kNoNode), to_before_(after_size, kNoNode) {}

  void link(NodeId before, NodeId after) {
    to_after_[static_cast<std::size_t>(before)] = after;
    to_before_[static_cast<std::size_t>(after)] = before;
  }
  NodeId after_of(NodeId before) const { return to_after_[static_cast<std::size_t>(before)]; }
  NodeId before_of(NodeId after) const { return to_before_[static_cast<std::size_t>(after)]; }
  bool has_before(NodeId before) const { return after_of(before) != kNoNode; }
  bool has_after(NodeId after) const { return before_of(after) != kNoNode; }
  std::size_t size() const;

 private:
  std::vector<NodeId> to_after_;
  std::vector<NodeId> to_before_;
};

struct MatcherOptions {
  int min_height = 2;       // smallest subtree height matched top-down
  double min_dice = 0.5;    // bottom-up container similarity threshold
};

/// Greedy top-down isomorphic-subtree matching followed by bottom-up
/// container matching with child-sequence recovery.
Mapping match_trees(const SyntaxTree& before, const SyntaxTree& after, const MatcherOptions& options = {});

enum class EditAction { Insert, Delete, Update, Move };

std::string_view to_string(EditAction action);

/// Edit in terms of both trees plus the working-tree ids needed to replay it.
///
/// Working ids: [0, before.size()) are before-tree nodes, before.size() is
/// the synthetic root above both trees, and each Insert allocates the next id.
struct Edit {
  EditAction action{};
  NodeKind node_kind{};
  NodeId before_node = kNoNode;  // Delete, Update, Move
  NodeId after_node = kNoNode;   // Insert, Update, Move
  SourceSpan before_span;
  SourceSpan after_span;

  int target = -1;    // working id acted on (allocated id for Insert)
  int parent = -1;    // working id of the new parent (Insert, Move)
  int position = 0;   // child index under `parent`
  std::string value;  // new label (Insert, Update)
};

struct EditScript {
  std::vector<Edit> edits;
  Mapping mapping;

  bool empty() const { return edits.empty(); }
};

EditScript diff_trees(const SyntaxTree& before, const SyntaxTree& after, const MatcherOptions& options = {});

/// Replays `script` on a copy of `before`. For a correct script the result is
/// isomorphic to the after tree it was generated against.
SyntaxTree apply_edit_script(const SyntaxTree& before, const EditScript& script);

}  // namespace fixrank

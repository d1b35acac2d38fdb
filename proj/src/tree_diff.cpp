#include "fixrank/tree_diff.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace fixrank {

std::size_t Mapping::size() const {
  return static_cast<std::size_t>(std::count_if(to_after_.begin(), to_after_.end(), [](NodeId n) { return n != kNoNode; }));
}

std::string_view to_string(EditAction action) {
  switch (action) {
    case EditAction::Insert: return "insert";
    case EditAction::Delete: return "delete";
    case EditAction::Update: return "update";
    case EditAction::Move: return "move";
  }
  return "?";
}

namespace {

// Longest common subsequence of two sequences under `eq`; returns index pairs.
template <typename A, typename B, typename Eq>
std::vector<std::pair<std::size_t, std::size_t>> lcs(const std::vector<A>& a, const std::vector<B>& b, Eq eq) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> len(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      len[i][j] = eq(a[i], b[j]) ? len[i + 1][j + 1] + 1 : std::max(len[i + 1][j], len[i][j + 1]);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (eq(a[i], b[j])) {
      out.emplace_back(i, j);
      ++i;
      ++j;
    } else if (len[i + 1][j] >= len[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

// Nodes bucketed by height; pop() returns every node of the greatest height.
class HeightQueue {
 public:
  explicit HeightQueue(const SyntaxTree& t) : tree_(t) {}
  void push(NodeId id) { buckets_[tree_.node(id).height].push_back(id); }
  int peek_max() const { return buckets_.empty() ? 0 : buckets_.rbegin()->first; }
  std::vector<NodeId> pop() {
    auto it = std::prev(buckets_.end());
    auto out = std::move(it->second);
    buckets_.erase(it);
    std::sort(out.begin(), out.end());
    return out;
  }
  void open(NodeId id) {
    for (NodeId c : tree_.node(id).children) push(c);
  }

 private:
  const SyntaxTree& tree_;
  std::map<int, std::vector<NodeId>> buckets_;
};

class Matcher {
 public:
  Matcher(const SyntaxTree& t1, const SyntaxTree& t2, const MatcherOptions& options)
      : t1_(t1), t2_(t2), opt_(options), m_(t1.size(), t2.size()) {}

  Mapping run() {
    if (t1_.size() == 0 || t2_.size() == 0) return m_;
    top_down();
    bottom_up();
    return std::move(m_);
  }

 private:
  bool subtree_unmapped(const SyntaxTree& t, NodeId id, bool before_side) const {
    for (NodeId d = id; d <= t.last_descendant(id); ++d)
      if (before_side ? m_.has_before(d) : m_.has_after(d)) return false;
    return true;
  }

  void link_subtrees(NodeId a, NodeId b) {
    for (int i = 0; i < t1_.node(a).size; ++i) m_.link(a + i, b + i);
  }

  double dice(NodeId a, NodeId b) const {
    if (a == kNoNode || b == kNoNode) return 0.0;
    int common = 0;
    for (NodeId d = a + 1; d <= t1_.last_descendant(a); ++d) {
      NodeId x = m_.after_of(d);
      if (x != kNoNode && t2_.is_descendant(x, b)) ++common;
    }
    int total = (t1_.node(a).size - 1) + (t2_.node(b).size - 1);
    return total == 0 ? 0.0 : 2.0 * common / total;
  }

  void top_down() {
    HeightQueue q1(t1_), q2(t2_);
    q1.push(t1_.root());
    q2.push(t2_.root());
    std::vector<std::pair<NodeId, NodeId>> candidates;
    while (std::min(q1.peek_max(), q2.peek_max()) >= opt_.min_height) {
      int h1 = q1.peek_max(), h2 = q2.peek_max();
      if (h1 != h2) {
        auto& q = h1 > h2 ? q1 : q2;
        for (NodeId id : q.pop()) q.open(id);
        continue;
      }
      auto a = q1.pop();
      auto b = q2.pop();
      std::unordered_map<std::uint64_t, std::vector<NodeId>> by_hash;
      for (NodeId y : b) by_hash[t2_.node(y).hash].push_back(y);
      std::unordered_set<NodeId> hit1, hit2;
      for (NodeId x : a) {
        auto it = by_hash.find(t1_.node(x).hash);
        if (it == by_hash.end()) continue;
        for (NodeId y : it->second) {
          if (t1_.isomorphic(x, t2_, y)) {
            candidates.emplace_back(x, y);
            hit1.insert(x);
            hit2.insert(y);
          }
        }
      }
      for (NodeId x : a)
        if (!hit1.count(x)) q1.open(x);
      for (NodeId y : b)
        if (!hit2.count(y)) q2.open(y);
    }
    std::unordered_map<NodeId, int> per1, per2;
    for (auto [x, y] : candidates) {
      ++per1[x];
      ++per2[y];
    }
    std::vector<std::pair<NodeId, NodeId>> ambiguous;
    for (auto [x, y] : candidates) {
      if (per1[x] == 1 && per2[y] == 1)
        link_subtrees(x, y);
      else
        ambiguous.emplace_back(x, y);
    }
    struct Scored {
      double sim;
      int distance;
      NodeId x, y;
    };
    std::vector<Scored> scored;
    scored.reserve(ambiguous.size());
    for (auto [x, y] : ambiguous)
      scored.push_back({dice(t1_.parent(x), t2_.parent(y)),
                        std::abs(t1_.position_in_parent(x) - t2_.position_in_parent(y)), x, y});
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& l, const Scored& r) {
      if (l.sim != r.sim) return l.sim > r.sim;
      if (l.distance != r.distance) return l.distance < r.distance;
      if (l.x != r.x) return l.x < r.x;
      return l.y < r.y;
    });
    for (const auto& s : scored)
      if (subtree_unmapped(t1_, s.x, true) && subtree_unmapped(t2_, s.y, false)) link_subtrees(s.x, s.y);
  }

  void bottom_up() {
    // pre-order ids reversed are a valid post-order for "children before parent"
    std::vector<NodeId> order;
    order.reserve(t1_.size());
    post_order(t1_, t1_.root(), order);
    for (NodeId x : order) {
      if (x == t1_.root()) {
        NodeId r2 = t2_.root();
        if (!m_.has_before(x) && !m_.has_after(r2) && t1_.kind(x) == t2_.kind(r2)) m_.link(x, r2);
        if (m_.after_of(x) == r2) recover(x, r2);
        break;
      }
      if (m_.has_before(x) || t1_.node(x).children.empty()) continue;
      NodeId best = kNoNode;
      double best_sim = -1.0;
      for (NodeId y : container_candidates(x)) {
        double sim = dice(x, y);
        if (sim > best_sim && sim >= opt_.min_dice) {
          best_sim = sim;
          best = y;
        }
      }
      if (best != kNoNode) {
        m_.link(x, best);
        recover(x, best);
      }
    }
  }

  static void post_order(const SyntaxTree& t, NodeId id, std::vector<NodeId>& out) {
    for (NodeId c : t.node(id).children) post_order(t, c, out);
    out.push_back(id);
  }

  std::vector<NodeId> container_candidates(NodeId x) const {
    std::vector<NodeId> out;
    std::unordered_set<NodeId> seen;
    for (NodeId d = x + 1; d <= t1_.last_descendant(x); ++d) {
      NodeId y = m_.after_of(d);
      if (y == kNoNode) continue;
      for (NodeId p = t2_.parent(y); p != kNoNode; p = t2_.parent(p)) {
        if (!seen.insert(p).second) break;
        if (t2_.kind(p) == t1_.kind(x) && !m_.has_after(p) && p != t2_.root()) out.push_back(p);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<NodeId> unmapped_children(const SyntaxTree& t, NodeId id, bool before_side) const {
    std::vector<NodeId> out;
    for (NodeId c : t.node(id).children)
      if (!(before_side ? m_.has_before(c) : m_.has_after(c))) out.push_back(c);
    return out;
  }

  void recover(NodeId x, NodeId y) {
    // 1. isomorphic children in sequence
    auto u1 = unmapped_children(t1_, x, true);
    auto u2 = unmapped_children(t2_, y, false);
    for (auto [i, j] : lcs(u1, u2, [&](NodeId a, NodeId b) { return t1_.isomorphic(a, t2_, b); }))
      if (subtree_unmapped(t1_, u1[i], true) && subtree_unmapped(t2_, u2[j], false)) link_subtrees(u1[i], u2[j]);
    // 2. same label in sequence
    u1 = unmapped_children(t1_, x, true);
    u2 = unmapped_children(t2_, y, false);
    for (auto [i, j] : lcs(u1, u2, [&](NodeId a, NodeId b) {
           return t1_.kind(a) == t2_.kind(b) && t1_.value(a) == t2_.value(b);
         })) {
      m_.link(u1[i], u2[j]);
      recover(u1[i], u2[j]);
    }
    // 3. kinds that occur exactly once on each side
    u1 = unmapped_children(t1_, x, true);
    u2 = unmapped_children(t2_, y, false);
    std::map<NodeKind, std::vector<NodeId>> k1, k2;
    for (NodeId a : u1) k1[t1_.kind(a)].push_back(a);
    for (NodeId b : u2) k2[t2_.kind(b)].push_back(b);
    for (auto& [kind, as] : k1) {
      auto it = k2.find(kind);
      if (as.size() == 1 && it != k2.end() && it->second.size() == 1) {
        m_.link(as[0], it->second[0]);
        recover(as[0], it->second[0]);
      }
    }
    // 4. a child wrapped in, or unwrapped from, a new node on the other side
    u1 = unmapped_children(t1_, x, true);
    u2 = unmapped_children(t2_, y, false);
    for (NodeId a : u1)
      for (NodeId b : u2)
        if (auto d = find_isomorphic(t1_, a, t2_, b, false); d != kNoNode) {
          link_subtrees(a, d);
          break;
        }
    u1 = unmapped_children(t1_, x, true);
    u2 = unmapped_children(t2_, y, false);
    for (NodeId b : u2)
      for (NodeId a : u1)
        if (auto d = find_isomorphic(t2_, b, t1_, a, true); d != kNoNode) {
          link_subtrees(d, b);
          break;
        }
  }

  // First proper descendant of `within` (in `t`) isomorphic to `n` (in `s`)
  // whose subtree is still unmapped. `t_is_before` names the side of `t`.
  NodeId find_isomorphic(const SyntaxTree& s, NodeId n, const SyntaxTree& t, NodeId within, bool t_is_before) const {
    if (!subtree_unmapped(s, n, !t_is_before)) return kNoNode;
    for (NodeId d = within + 1; d <= t.last_descendant(within); ++d)
      if (t.node(d).hash == s.node(n).hash && s.isomorphic(n, t, d) && subtree_unmapped(t, d, t_is_before)) return d;
    return kNoNode;
  }

  const SyntaxTree& t1_;
  const SyntaxTree& t2_;
  MatcherOptions opt_;
  Mapping m_;
};

// --- edit script ------------------------------------------------------------

struct WorkNode {
  NodeKind kind{};
  std::string value;
  int parent = -1;
  std::vector<int> children;
};

class WorkTree {
 public:
  explicit WorkTree(const SyntaxTree& t) {
    nodes_.reserve(t.size() + 1);
    for (const auto& n : t.nodes()) {
      WorkNode w;
      w.kind = n.kind;
      w.value = n.value;
      w.parent = n.parent;
      w.children.assign(n.children.begin(), n.children.end());
      nodes_.push_back(std::move(w));
    }
    fake_root_ = static_cast<int>(nodes_.size());
    nodes_.push_back(WorkNode{NodeKind::CompilationUnit, "", -1, {}});
    if (t.size() > 0) {
      nodes_[0].parent = fake_root_;
      nodes_[static_cast<std::size_t>(fake_root_)].children.push_back(0);
    }
  }

  int fake_root() const { return fake_root_; }
  WorkNode& at(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  const WorkNode& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  int create(NodeKind kind, std::string value) {
    nodes_.push_back(WorkNode{kind, std::move(value), -1, {}});
    return static_cast<int>(nodes_.size() - 1);
  }
  void detach(int id) {
    auto& w = at(id);
    if (w.parent < 0) return;
    auto& sib = at(w.parent).children;
    sib.erase(std::find(sib.begin(), sib.end(), id));
    w.parent = -1;
  }
  void insert(int id, int parent, int position) {
    auto& sib = at(parent).children;
    position = std::clamp(position, 0, static_cast<int>(sib.size()));
    sib.insert(sib.begin() + position, id);
    at(id).parent = parent;
  }
  int position_in_parent(int id) const {
    const auto& sib = at(at(id).parent).children;
    return static_cast<int>(std::find(sib.begin(), sib.end(), id) - sib.begin());
  }

  SyntaxTree to_tree() const {
    std::vector<Node> nodes(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      nodes[i].kind = nodes_[i].kind;
      nodes[i].value = nodes_[i].value;
      nodes[i].parent = nodes_[i].parent;
      nodes[i].children.assign(nodes_[i].children.begin(), nodes_[i].children.end());
    }
    const auto& top = at(fake_root_).children;
    if (top.empty()) return SyntaxTree{};
    return SyntaxTree::from_nodes(std::move(nodes), top.front());
  }

 private:
  std::vector<WorkNode> nodes_;
  int fake_root_ = -1;
};

class ScriptGenerator {
 public:
  ScriptGenerator(const SyntaxTree& t1, const SyntaxTree& t2, Mapping mapping)
      : t1_(t1), t2_(t2), work_(t1), mapping_(std::move(mapping)) {}

  EditScript run() {
    const int fake = work_.fake_root();
    // working id <-> after id; after's synthetic root is represented by -2
    w2x_.assign(static_cast<std::size_t>(work_.size()), kNoNode);
    x2w_.assign(t2_.size(), -1);
    for (NodeId a = 0; a < static_cast<NodeId>(t1_.size()); ++a)
      if (NodeId b = mapping_.after_of(a); b != kNoNode) link(a, b);
    in_order_w_.assign(static_cast<std::size_t>(work_.size()), false);
    in_order_x_.assign(t2_.size(), false);

    std::deque<NodeId> bfs;
    if (t2_.size() > 0) bfs.push_back(t2_.root());
    while (!bfs.empty()) {
      NodeId x = bfs.front();
      bfs.pop_front();
      for (NodeId c : t2_.node(x).children) bfs.push_back(c);

      NodeId y = t2_.parent(x);
      int z = y == kNoNode ? fake : x2w_[static_cast<std::size_t>(y)];
      int w = x2w_[static_cast<std::size_t>(x)];
      if (w < 0) {
        int k = find_position(x);
        w = work_.create(t2_.kind(x), t2_.value(x));
        grow();
        link(w, x);
        work_.insert(w, z, k);
        Edit e{EditAction::Insert, t2_.kind(x), kNoNode, x, {}, t2_.node(x).span, w, z, k, t2_.value(x)};
        edits_.push_back(std::move(e));
      } else {
        if (work_.at(w).value != t2_.value(x)) {
          work_.at(w).value = t2_.value(x);
          edits_.push_back(Edit{EditAction::Update, t2_.kind(x), w, x, t1_.node(w).span, t2_.node(x).span, w, -1, 0,
                                t2_.value(x)});
        }
        if (work_.at(w).parent != z) {
          work_.detach(w);
          int k = find_position(x);
          work_.insert(w, z, k);
          edits_.push_back(Edit{EditAction::Move, t2_.kind(x), w, x, t1_.node(w).span, t2_.node(x).span, w, z, k, {}});
        }
      }
      in_order_w_[static_cast<std::size_t>(w)] = true;
      in_order_x_[static_cast<std::size_t>(x)] = true;
      align_children(w, x);
    }

    std::vector<int> order;
    post_order(fake, order);
    for (int w : order) {
      if (w == fake || w2x_[static_cast<std::size_t>(w)] != kNoNode) continue;
      edits_.push_back(Edit{EditAction::Delete, t1_.kind(w), w, kNoNode, t1_.node(w).span, {}, w, -1, 0, {}});
      work_.detach(w);
    }
    return EditScript{std::move(edits_), std::move(mapping_)};
  }

 private:
  void grow() {
    auto n = static_cast<std::size_t>(work_.size());
    w2x_.resize(n, kNoNode);
    in_order_w_.resize(n, false);
  }
  void link(int w, NodeId x) {
    w2x_[static_cast<std::size_t>(w)] = x;
    x2w_[static_cast<std::size_t>(x)] = w;
  }

  void post_order(int w, std::vector<int>& out) const {
    for (int c : work_.at(w).children) post_order(c, out);
    out.push_back(w);
  }

  void align_children(int w, NodeId x) {
    for (int c : work_.at(w).children) in_order_w_[static_cast<std::size_t>(c)] = false;
    for (NodeId c : t2_.node(x).children) in_order_x_[static_cast<std::size_t>(c)] = false;
    std::vector<int> s1;
    for (int c : work_.at(w).children) {
      NodeId p = w2x_[static_cast<std::size_t>(c)];
      if (p != kNoNode && t2_.parent(p) == x) s1.push_back(c);
    }
    std::vector<NodeId> s2;
    for (NodeId c : t2_.node(x).children) {
      int p = x2w_[static_cast<std::size_t>(c)];
      if (p >= 0 && work_.at(p).parent == w) s2.push_back(c);
    }
    auto common = lcs(s1, s2, [&](int a, NodeId b) { return w2x_[static_cast<std::size_t>(a)] == b; });
    std::vector<bool> kept1(s1.size(), false);
    for (auto [i, j] : common) {
      kept1[i] = true;
      in_order_w_[static_cast<std::size_t>(s1[i])] = true;
      in_order_x_[static_cast<std::size_t>(s2[j])] = true;
    }
    for (std::size_t i = 0; i < s1.size(); ++i) {
      if (kept1[i]) continue;
      int a = s1[i];
      NodeId b = w2x_[static_cast<std::size_t>(a)];
      work_.detach(a);
      int k = find_position(b);
      work_.insert(a, w, k);
      edits_.push_back(Edit{EditAction::Move, t2_.kind(b), a, b, t1_.node(a).span, t2_.node(b).span, a, w, k, {}});
      in_order_w_[static_cast<std::size_t>(a)] = true;
      in_order_x_[static_cast<std::size_t>(b)] = true;
    }
  }

  // Index under partner(parent(x)) just after the partner of x's rightmost
  // in-order left sibling.
  int find_position(NodeId x) const {
    NodeId y = t2_.parent(x);
    if (y == kNoNode) return 0;
    const auto& siblings = t2_.node(y).children;
    NodeId v = kNoNode;
    for (NodeId c : siblings) {
      if (c == x) break;
      if (in_order_x_[static_cast<std::size_t>(c)]) v = c;
    }
    if (v == kNoNode) return 0;
    int u = x2w_[static_cast<std::size_t>(v)];
    return work_.position_in_parent(u) + 1;
  }

  const SyntaxTree& t1_;
  const SyntaxTree& t2_;
  WorkTree work_;
  Mapping mapping_;
  std::vector<NodeId> w2x_;
  std::vector<int> x2w_;
  std::vector<bool> in_order_w_;
  std::vector<bool> in_order_x_;
  std::vector<Edit> edits_;
};

}  // namespace

Mapping match_trees(const SyntaxTree& before, const SyntaxTree& after, const MatcherOptions& options) {
  return Matcher(before, after, options).run();
}

EditScript diff_trees(const SyntaxTree& before, const SyntaxTree& after, const MatcherOptions& options) {
  return ScriptGenerator(before, after, match_trees(before, after, options)).run();
}

SyntaxTree apply_edit_script(const SyntaxTree& before, const EditScript& script) {
  WorkTree work(before);
  for (const auto& e : script.edits) {
    switch (e.action) {
      case EditAction::Insert: {
        int id = work.create(e.node_kind, e.value);
        work.insert(id, e.parent, e.position);
        break;
      }
      case EditAction::Update:
        work.at(e.target).value = e.value;
        break;
      case EditAction::Move:
        work.detach(e.target);
        work.insert(e.target, e.parent, e.position);
        break;
      case EditAction::Delete:
        work.detach(e.target);
        break;
    }
  }
  return work.to_tree();
}

}  // namespace fixrank

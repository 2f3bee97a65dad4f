#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace treent {

using label_id = std::uint32_t;
using node_index = std::uint32_t;

// Reserved id for the out-of-alphabet pad symbol; never handed out by an alphabet.
inline constexpr label_id sentinel_label = 0xffffffffu;
inline constexpr node_index nil_node = 0xffffffffu;

namespace detail {
struct string_hash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};
}  // namespace detail

class pad_policy;

/// Bijective mapping between label strings and dense ids: equal text <=> equal id
/// within one alphabet.
class alphabet {
 public:
  label_id intern(std::string_view text) {
    auto it = ids_.find(text);
    if (it != ids_.end()) return it->second;
    if (texts_.size() >= static_cast<std::size_t>(sentinel_label))
      throw std::length_error("alphabet full");
    label_id id = static_cast<label_id>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return id;
  }

  std::optional<label_id> find(std::string_view text) const {
    auto it = ids_.find(text);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return texts_.size(); }

  std::string_view text(label_id id) const {
    if (id == sentinel_label) return "□";  // printed form of the sentinel pad
    return texts_.at(id);
  }

  const std::vector<std::string>& symbols() const { return texts_; }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, label_id, detail::string_hash, std::equal_to<>> ids_;
};

/// How histories shorter than k are completed and how fcns labels its fresh
/// leaves: either a designated alphabet member or a reserved sentinel that
/// never collides with ingested labels.
class pad_policy {
 public:
  static pad_policy sentinel() { return pad_policy(sentinel_label); }

  static pad_policy in_alphabet(label_id id) {
    if (id == sentinel_label)
      throw std::invalid_argument("pad label collides with the reserved sentinel");
    return pad_policy(id);
  }

  label_id pad_label() const { return pad_; }
  bool is_sentinel() const { return pad_ == sentinel_label; }

  friend bool operator==(pad_policy a, pad_policy b) { return a.pad_ == b.pad_; }

 private:
  explicit pad_policy(label_id p) : pad_(p) {}
  label_id pad_;
};

/// Ordered rooted unranked tree stored as an arena of nodes in preorder.
/// Immutable after construction; shareable read-only across threads.
class tree {
 public:
  struct node {
    label_id label = 0;
    node_index parent = nil_node;
    node_index first_child = nil_node;
    node_index next_sibling = nil_node;
  };

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  node_index root() const { return 0; }

  label_id label(node_index v) const { return nodes_[v].label; }
  node_index parent(node_index v) const { return nodes_[v].parent; }
  node_index first_child(node_index v) const { return nodes_[v].first_child; }
  node_index next_sibling(node_index v) const { return nodes_[v].next_sibling; }

  std::size_t degree(node_index v) const {
    std::size_t d = 0;
    for (node_index c = first_child(v); c != nil_node; c = next_sibling(c)) ++d;
    return d;
  }

  std::map<std::uint64_t, std::uint64_t> degree_histogram() const {
    std::map<std::uint64_t, std::uint64_t> h;
    for (node_index v = 0; v < nodes_.size(); ++v) ++h[degree(v)];
    return h;
  }

  bool is_binary() const {
    for (node_index v = 0; v < nodes_.size(); ++v) {
      std::size_t d = degree(v);
      if (d != 0 && d != 2) return false;
    }
    return true;
  }

  /// True iff arena order is preorder: each node appears after its parent and
  /// the first child directly follows it.
  bool is_preorder() const {
    if (nodes_.empty()) return true;
    for (node_index v = 0; v < nodes_.size(); ++v) {
      node_index fc = nodes_[v].first_child;
      if (fc != nil_node && fc != v + 1) return false;
      if (nodes_[v].parent != nil_node && nodes_[v].parent >= v) return false;
    }
    return true;
  }

  friend bool operator==(const tree& a, const tree& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<std::pair<node_index, node_index>> stack{{a.root(), b.root()}};
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      if (a.label(x) != b.label(y)) return false;
      node_index cx = a.first_child(x);
      node_index cy = b.first_child(y);
      while (cx != nil_node && cy != nil_node) {
        stack.emplace_back(cx, cy);
        cx = a.next_sibling(cx);
        cy = b.next_sibling(cy);
      }
      if (cx != cy) return false;
    }
    return true;
  }

 private:
  friend class tree_builder;
  std::vector<node> nodes_;
};

/// Appends nodes in preorder; tracks last children so appends are O(1).
class tree_builder {
 public:
  node_index add_root(label_id lab) {
    if (!t_.nodes_.empty()) throw std::logic_error("tree already has a root");
    t_.nodes_.push_back({lab, nil_node, nil_node, nil_node});
    last_child_.push_back(nil_node);
    return 0;
  }

  node_index add_child(node_index parent, label_id lab) {
    node_index id = static_cast<node_index>(t_.nodes_.size());
    t_.nodes_.push_back({lab, parent, nil_node, nil_node});
    last_child_.push_back(nil_node);
    if (last_child_[parent] == nil_node)
      t_.nodes_[parent].first_child = id;
    else
      t_.nodes_[last_child_[parent]].next_sibling = id;
    last_child_[parent] = id;
    return id;
  }

  void reserve(std::size_t n) {
    t_.nodes_.reserve(n);
    last_child_.reserve(n);
  }

  std::size_t size() const { return t_.size(); }

  tree take() {
    last_child_.clear();
    return std::move(t_);
  }

 private:
  tree t_;
  std::vector<node_index> last_child_;
};

/// Tree in which every node has exactly 0 or 2 children (checked on construction).
class binary_tree {
 public:
  explicit binary_tree(tree t) : t_(std::move(t)) {
    if (t_.empty()) throw std::invalid_argument("binary tree must not be empty");
    if (!t_.is_binary())
      throw std::invalid_argument("not a binary tree: every node needs degree 0 or 2");
  }

  const tree& as_tree() const { return t_; }
  std::size_t size() const { return t_.size(); }
  node_index root() const { return t_.root(); }
  label_id label(node_index v) const { return t_.label(v); }
  bool is_leaf(node_index v) const { return t_.first_child(v) == nil_node; }
  node_index left(node_index v) const { return t_.first_child(v); }

  node_index right(node_index v) const {
    node_index l = t_.first_child(v);
    return l == nil_node ? nil_node : t_.next_sibling(l);
  }

 private:
  tree t_;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the nested term syntax: a label is any run of characters excluding
/// whitespace and parentheses; children follow in parentheses, whitespace
/// separated, e.g. "a(b c(d))". "a()" and "a" are both a single leaf.
inline tree build_tree(std::string_view term, alphabet& sigma) {
  tree_builder b;
  std::vector<node_index> parents;
  std::size_t i = 0;
  const std::size_t n = term.size();
  bool can_open = false;  // '(' is only valid directly after a label
  node_index last = nil_node;
  auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (i < n) {
    char c = term[i];
    if (is_ws(c)) {
      ++i;
      continue;
    }
    if (c == '(') {
      if (!can_open) throw parse_error("unexpected '('", i);
      parents.push_back(last);
      can_open = false;
      ++i;
      continue;
    }
    if (c == ')') {
      if (parents.empty()) throw parse_error("unmatched ')'", i);
      last = parents.back();
      parents.pop_back();
      can_open = false;
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && !is_ws(term[i]) && term[i] != '(' && term[i] != ')') ++i;
    label_id lab = sigma.intern(term.substr(start, i - start));
    if (parents.empty()) {
      if (b.size() != 0) throw parse_error("unexpected label after the root term", start);
      last = b.add_root(lab);
    } else {
      last = b.add_child(parents.back(), lab);
    }
    can_open = true;
  }
  if (!parents.empty()) throw parse_error("unclosed '('", n);
  if (b.size() == 0) throw parse_error("empty term", 0);
  return b.take();
}

inline std::string to_term(const tree& t, const alphabet& sigma) {
  std::string out;
  if (t.empty()) return out;
  struct tok {
    node_index v;
    bool close;
  };
  std::vector<tok> stack{{t.root(), false}};
  std::vector<node_index> chain;
  while (!stack.empty()) {
    tok top = stack.back();
    stack.pop_back();
    if (top.close) {
      out += ')';
      continue;
    }
    if (!out.empty() && out.back() != '(') out += ' ';
    out += sigma.text(t.label(top.v));
    if (t.first_child(top.v) != nil_node) {
      out += '(';
      stack.push_back({top.v, true});
      chain.clear();
      for (node_index c = t.first_child(top.v); c != nil_node; c = t.next_sibling(c))
        chain.push_back(c);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) stack.push_back({*it, false});
    }
  }
  return out;
}

/// First-child next-sibling encoding. The left child of a node is its first
/// child in t (or a pad leaf), the right child its next sibling (or a pad
/// leaf); the result has size 2|t|+1 and its inner nodes are exactly the
/// nodes of t.
inline binary_tree fcns(const tree& t, pad_policy pad) {
  tree_builder b;
  b.reserve(2 * t.size() + 1);
  if (t.empty()) {
    b.add_root(pad.pad_label());
    return binary_tree(b.take());
  }
  struct frame {
    node_index src;  // node of t, or nil_node for a pad leaf
    node_index parent;
  };
  std::vector<frame> stack;
  stack.push_back({t.root(), nil_node});
  while (!stack.empty()) {
    frame f = stack.back();
    stack.pop_back();
    if (f.src == nil_node) {
      if (f.parent == nil_node)
        b.add_root(pad.pad_label());
      else
        b.add_child(f.parent, pad.pad_label());
      continue;
    }
    node_index id = f.parent == nil_node ? b.add_root(t.label(f.src))
                                         : b.add_child(f.parent, t.label(f.src));
    // right subtree below left on the stack, so the left child is emitted first
    stack.push_back({t.next_sibling(f.src), id});
    stack.push_back({t.first_child(f.src), id});
  }
  return binary_tree(b.take());
}

/// Inverse of fcns: takes the inner nodes, re-reading left children as first
/// children and right children as next siblings. Leaves terminate chains.
inline tree fcns_decode(const binary_tree& b) {
  tree_builder out;
  if (b.is_leaf(b.root())) return out.take();  // encoding of the empty forest
  struct frame {
    node_index src;  // inner node of b
    node_index parent;
  };
  std::vector<frame> stack{{b.root(), nil_node}};
  std::vector<node_index> chain;
  while (!stack.empty()) {
    frame f = stack.back();
    stack.pop_back();
    node_index id = f.parent == nil_node ? out.add_root(b.label(f.src))
                                         : out.add_child(f.parent, b.label(f.src));
    chain.clear();
    for (node_index c = b.left(f.src); c != nil_node && !b.is_leaf(c); c = b.right(c))
      chain.push_back(c);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) stack.push_back({*it, id});
  }
  return out.take();
}

}  // namespace treent

#pragma once

#include <cstdint>
#include <vector>

#include "tree.hpp"

namespace treent {
namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_window(const std::uint64_t* w, std::size_t len) {
  std::uint64_t h = 0x2545f4914f6cdd1dull;
  for (std::size_t i = 0; i < len; ++i) h = mix64(h ^ w[i]);
  return h;
}

/// Interns fixed-width windows of 64-bit symbols to dense ids in first-seen
/// order. Keys are compared in full; only occurring windows are stored.
class window_interner {
 public:
  explicit window_interner(std::size_t width) : width_(width) { rehash(64); }

  std::uint32_t intern(const std::uint64_t* w) {
    const std::uint64_t h = hash_window(w, width_);
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(h) & mask;
    while (slots_[i] != 0) {
      std::uint32_t id = slots_[i] - 1;
      if (hashes_[id] == h && equal(id, w)) return id;
      i = (i + 1) & mask;
    }
    std::uint32_t id = static_cast<std::uint32_t>(hashes_.size());
    arena_.insert(arena_.end(), w, w + width_);
    hashes_.push_back(h);
    slots_[i] = id + 1;
    if (hashes_.size() * 10 >= slots_.size() * 7) rehash(slots_.size() * 2);
    return id;
  }

  std::size_t width() const { return width_; }
  std::size_t size() const { return hashes_.size(); }

  const std::uint64_t* key(std::uint32_t id) const {
    return arena_.data() + static_cast<std::size_t>(id) * width_;
  }

 private:
  bool equal(std::uint32_t id, const std::uint64_t* w) const {
    const std::uint64_t* k = key(id);
    for (std::size_t i = 0; i < width_; ++i)
      if (k[i] != w[i]) return false;
    return true;
  }

  void rehash(std::size_t cap) {
    slots_.assign(cap, 0);
    const std::size_t mask = cap - 1;
    for (std::uint32_t id = 0; id < hashes_.size(); ++id) {
      std::size_t i = static_cast<std::size_t>(hashes_[id]) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = id + 1;
    }
  }

  std::size_t width_;
  std::vector<std::uint64_t> arena_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;
};

/// Open-addressed map from 64-bit keys to counts, iterable in insertion order.
class u64_counter {
 public:
  u64_counter() { rehash(64); }

  std::uint32_t add(std::uint64_t key, std::int64_t amount = 1) {
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(mix64(key)) & mask;
    while (slots_[i] != 0) {
      std::uint32_t id = slots_[i] - 1;
      if (keys_[id] == key) {
        counts_[id] += amount;
        return id;
      }
      i = (i + 1) & mask;
    }
    std::uint32_t id = static_cast<std::uint32_t>(keys_.size());
    keys_.push_back(key);
    counts_.push_back(amount);
    slots_[i] = id + 1;
    if (keys_.size() * 10 >= slots_.size() * 7) rehash(slots_.size() * 2);
    return id;
  }

  std::int64_t count(std::uint64_t key) const {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(mix64(key)) & mask;
    while (slots_[i] != 0) {
      std::uint32_t id = slots_[i] - 1;
      if (keys_[id] == key) return counts_[id];
      i = (i + 1) & mask;
    }
    return 0;
  }

  std::size_t size() const { return keys_.size(); }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  void rehash(std::size_t cap) {
    slots_.assign(cap, 0);
    const std::size_t mask = cap - 1;
    for (std::uint32_t id = 0; id < keys_.size(); ++id) {
      std::size_t i = static_cast<std::size_t>(mix64(keys_[id])) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = id + 1;
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::int64_t> counts_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace detail

/// Joint occurrence tables over k-label-histories z (the labels of the k
/// nearest ancestors, front-padded when the node is shallower than k), node
/// labels a and node degrees i. Only occurring keys are materialized.
struct unranked_counts {
  explicit unranked_counts(std::uint32_t k_) : k(k_), z(k_) {}

  std::uint32_t k;
  std::int64_t total = 0;
  detail::window_interner z;   // history windows, width k
  std::vector<std::int64_t> n_z;  // indexed by history id
  detail::u64_counter n_i;     // degree -> count
  detail::u64_counter n_za;    // (history id << 32 | label) -> count
  detail::u64_counter n_zi;    // (history id << 32 | degree) -> count
  detail::u64_counter n_zia;   // (n_za entry id << 32 | degree) -> count
};

/// Single preorder pass; each node's history window is the length-k suffix of
/// pad^k followed by its ancestors' labels, assembled in O(k) from the running
/// root path.
inline unranked_counts label_history_counts(const tree& t, std::uint32_t k, pad_policy pad) {
  unranked_counts c(k);
  if (t.empty()) return c;
  const std::uint64_t padsym = pad.pad_label();
  std::vector<std::uint64_t> window(k);
  std::vector<std::uint64_t> path;  // ancestor labels, root first

  auto visit = [&](node_index v, std::size_t deg) {
    const std::size_t d = path.size();
    for (std::size_t j = 0; j < k; ++j)
      window[j] = (d + j < k) ? padsym : path[d + j - k];
    std::uint32_t zid = c.z.intern(window.data());
    if (zid == c.n_z.size()) c.n_z.push_back(0);
    ++c.n_z[zid];
    c.n_i.add(deg);
    std::uint32_t za_id = c.n_za.add((static_cast<std::uint64_t>(zid) << 32) | t.label(v));
    c.n_zi.add((static_cast<std::uint64_t>(zid) << 32) | deg);
    c.n_zia.add((static_cast<std::uint64_t>(za_id) << 32) | deg);
    ++c.total;
  };

  struct frame {
    node_index v;
    node_index next_child;
  };
  std::vector<frame> stack;
  visit(t.root(), t.degree(t.root()));
  if (t.first_child(t.root()) != nil_node) {
    path.push_back(t.label(t.root()));
    stack.push_back({t.root(), t.first_child(t.root())});
  }
  while (!stack.empty()) {
    frame& f = stack.back();
    if (f.next_child == nil_node) {
      path.pop_back();
      stack.pop_back();
      continue;
    }
    node_index v = f.next_child;
    f.next_child = t.next_sibling(v);
    visit(v, t.degree(v));
    if (t.first_child(v) != nil_node) {
      path.push_back(t.label(v));
      stack.push_back({v, t.first_child(v)});
    }
  }
  return c;
}

/// Occurrence tables over k-histories of a binary tree: windows of k
/// (ancestor label, direction) pairs, front-padded with (pad, left), jointly
/// with the node's (label, degree) value.
struct binary_counts {
  explicit binary_counts(std::uint32_t k_) : k(k_), z(k_) {}

  std::uint32_t k;
  std::int64_t total = 0;
  detail::window_interner z;      // windows of (label << 1 | direction), width k
  std::vector<std::int64_t> m_z;  // indexed by history id
  detail::u64_counter m_zlam;     // (history id << 33 | label << 1 | deg!=0) -> count
};

inline binary_counts full_history_counts(const binary_tree& b, std::uint32_t k, pad_policy pad) {
  binary_counts c(k);
  const std::uint64_t padpair = static_cast<std::uint64_t>(pad.pad_label()) << 1;
  std::vector<std::uint64_t> window(k);
  std::vector<std::uint64_t> path;  // (label, direction) pairs along the root path

  auto visit = [&](node_index v) {
    const std::size_t d = path.size();
    for (std::size_t j = 0; j < k; ++j)
      window[j] = (d + j < k) ? padpair : path[d + j - k];
    std::uint32_t zid = c.z.intern(window.data());
    if (zid == c.m_z.size()) c.m_z.push_back(0);
    ++c.m_z[zid];
    const std::uint64_t lam =
        (static_cast<std::uint64_t>(b.label(v)) << 1) | (b.is_leaf(v) ? 0u : 1u);
    c.m_zlam.add((static_cast<std::uint64_t>(zid) << 33) | lam);
    ++c.total;
  };

  struct frame {
    node_index v;
    int phase;  // 0: descend left, 1: descend right, 2: done
  };
  std::vector<frame> stack;
  visit(b.root());
  if (!b.is_leaf(b.root())) stack.push_back({b.root(), 0});
  while (!stack.empty()) {
    frame& f = stack.back();
    if (f.phase == 0) {
      f.phase = 1;
      path.push_back(static_cast<std::uint64_t>(b.label(f.v)) << 1);
      node_index u = b.left(f.v);
      visit(u);
      if (!b.is_leaf(u)) stack.push_back({u, 0});
    } else if (f.phase == 1) {
      f.phase = 2;
      path.back() = (static_cast<std::uint64_t>(b.label(f.v)) << 1) | 1u;
      node_index u = b.right(f.v);
      visit(u);
      if (!b.is_leaf(u)) stack.push_back({u, 0});
    } else {
      path.pop_back();
      stack.pop_back();
    }
  }
  return c;
}

}  // namespace treent

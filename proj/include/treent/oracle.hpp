#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tree.hpp"

namespace treent::oracle {

/// Reference results computed by the transparent implementation below. Field
/// names mirror entropy_report so tests can compare member by member.
struct oracle_report {
  std::uint32_t k = 0;
  std::uint64_t size = 0;
  double h_shape = 0;
  double h_deg = 0;
  double h_label = 0;
  double h_labeldeg = 0;
  double h_deglabel = 0;
};

namespace detail {

struct obin {
  label_id label;
  std::unique_ptr<obin> left;
  std::unique_ptr<obin> right;
};

/// First-child next-sibling encoding built literally from its recursive
/// definition over sibling forests.
inline std::unique_ptr<obin> obin_of_forest(std::span<const node_index> forest, const tree& t,
                                            const std::vector<std::vector<node_index>>& kids,
                                            label_id pad) {
  auto node = std::make_unique<obin>();
  if (forest.empty()) {
    node->label = pad;
    return node;
  }
  node->label = t.label(forest[0]);
  node->left = obin_of_forest(kids[forest[0]], t, kids, pad);
  node->right = obin_of_forest(forest.subspan(1), t, kids, pad);
  return node;
}

inline std::uint64_t obin_size(const obin* b) {
  return b == nullptr ? 0 : 1 + obin_size(b->left.get()) + obin_size(b->right.get());
}

using path_pair = std::pair<label_id, std::uint32_t>;  // (ancestor label, child direction)

struct obin_tallies {
  std::map<std::vector<path_pair>, std::int64_t> m_z;
  std::map<std::pair<std::vector<path_pair>, path_pair>, std::int64_t> m_zlam;
};

/// Walks the encoding keeping the full root-to-parent path; the history of a
/// node is the last k path entries, front-filled with (pad, 0).
inline void tally_obin(const obin* b, std::uint32_t k, label_id pad,
                       std::vector<path_pair>& path, obin_tallies& out) {
  std::vector<path_pair> z(k, {pad, 0});
  const std::size_t take = std::min<std::size_t>(k, path.size());
  for (std::size_t i = 0; i < take; ++i) z[k - 1 - i] = path[path.size() - 1 - i];
  const bool inner = b->left != nullptr;
  out.m_z[z] += 1;
  out.m_zlam[{z, {b->label, inner ? 1u : 0u}}] += 1;
  if (inner) {
    path.emplace_back(b->label, 0);
    tally_obin(b->left.get(), k, pad, path, out);
    path.back().second = 1;
    tally_obin(b->right.get(), k, pad, path, out);
    path.pop_back();
  }
}

}  // namespace detail

/// Checks a * log2(b / a) >= sum_i a_i * log2(b_i / a_i) for a = sum a_i,
/// b = sum b_i, with the 0 * log conventions. Terms with a_i > 0 and b_i = 0
/// drive the right side to -infinity.
struct log_sum_result {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

inline log_sum_result log_sum_check(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("log_sum_check: size mismatch");
  log_sum_result r;
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) throw std::invalid_argument("log_sum_check: negative entry");
    sa += a[i];
    sb += b[i];
    if (a[i] > 0) {
      if (b[i] == 0)
        r.rhs = -std::numeric_limits<double>::infinity();
      else if (r.rhs != -std::numeric_limits<double>::infinity())
        r.rhs += a[i] * std::log2(b[i] / a[i]);
    }
  }
  if (sa > 0) {
    if (sb == 0)
      r.lhs = -std::numeric_limits<double>::infinity();
    else
      r.lhs = sa * std::log2(sb / sa);
  }
  const double scale = std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  r.holds = r.rhs == -std::numeric_limits<double>::infinity() || r.lhs >= r.rhs - 1e-9 * scale;
  return r;
}

/// Recomputes every report quantity with ordered maps, parent-pointer walks
/// and plain summation. Intentionally shares no counting code with the main
/// implementation; capped because it is quadratic in the worst case.
inline oracle_report naive_report(const tree& t, std::uint32_t k, pad_policy pad,
                                  std::size_t cap = 10000) {
  if (t.size() > cap) throw std::invalid_argument("naive_report: tree larger than cap");
  oracle_report r;
  r.k = k;
  r.size = t.size();
  if (t.empty()) return r;

  const std::uint64_t n = t.size();
  const label_id padsym = pad.pad_label();

  std::map<std::uint64_t, std::int64_t> n_i;
  std::map<std::vector<label_id>, std::int64_t> n_z;
  std::map<std::pair<std::vector<label_id>, label_id>, std::int64_t> n_za;
  std::map<std::pair<std::vector<label_id>, std::uint64_t>, std::int64_t> n_zi;
  std::map<std::pair<std::pair<std::vector<label_id>, std::uint64_t>, label_id>, std::int64_t>
      n_zia;

  for (node_index v = 0; v < n; ++v) {
    std::uint64_t deg = 0;
    for (node_index c = t.first_child(v); c != nil_node; c = t.next_sibling(c)) ++deg;

    std::vector<label_id> up;  // labels parent, grandparent, ... toward the root
    for (node_index u = t.parent(v); u != nil_node; u = t.parent(u)) up.push_back(t.label(u));
    std::vector<label_id> z(k, padsym);
    const std::size_t take = std::min<std::size_t>(k, up.size());
    for (std::size_t i = 0; i < take; ++i) z[k - 1 - i] = up[i];

    n_i[deg] += 1;
    n_z[z] += 1;
    n_za[{z, t.label(v)}] += 1;
    n_zi[{z, deg}] += 1;
    n_zia[{{z, deg}, t.label(v)}] += 1;
  }

  for (const auto& [deg, cnt] : n_i)
    r.h_deg += static_cast<double>(cnt) *
               std::log2(static_cast<double>(n) / static_cast<double>(cnt));
  for (const auto& [key, cnt] : n_za)
    r.h_label += static_cast<double>(cnt) *
                 std::log2(static_cast<double>(n_z[key.first]) / static_cast<double>(cnt));
  for (const auto& [key, cnt] : n_zia) {
    const auto& [zdeg, a] = key;
    r.h_labeldeg += static_cast<double>(cnt) *
                    std::log2(static_cast<double>(n_za[{zdeg.first, a}]) /
                              static_cast<double>(cnt));
    r.h_deglabel += static_cast<double>(cnt) *
                    std::log2(static_cast<double>(n_zi[zdeg]) / static_cast<double>(cnt));
  }

  std::vector<std::vector<node_index>> kids(n);
  for (node_index v = 0; v < n; ++v)
    for (node_index c = t.first_child(v); c != nil_node; c = t.next_sibling(c))
      kids[v].push_back(c);
  const node_index root = t.root();
  auto enc = detail::obin_of_forest(std::span<const node_index>(&root, 1), t, kids, padsym);

  detail::obin_tallies tallies;
  std::vector<detail::path_pair> path;
  detail::tally_obin(enc.get(), k, padsym, path, tallies);
  for (const auto& [key, cnt] : tallies.m_zlam)
    r.h_shape += static_cast<double>(cnt) *
                 std::log2(static_cast<double>(tallies.m_z[key.first]) /
                           static_cast<double>(cnt));
  return r;
}

/// Shape entropy of a binary tree computed the same transparent way, without
/// the fcns step. Used to cross-check the direct binary analysis.
inline double naive_shape_entropy(const binary_tree& b, std::uint32_t k, pad_policy pad,
                                  std::size_t cap = 10000) {
  if (b.size() > cap) throw std::invalid_argument("naive_shape_entropy: tree larger than cap");

  // Rebuild as oracle nodes by walking the arena form.
  const tree& t = b.as_tree();
  std::vector<std::unique_ptr<detail::obin>> owned(t.size());
  for (node_index v = 0; v < t.size(); ++v) {
    owned[v] = std::make_unique<detail::obin>();
    owned[v]->label = t.label(v);
  }
  // Children sit after their parent in the arena, so assembling from the back
  // completes every subtree before its parent takes ownership.
  for (node_index v = t.size(); v-- > 0;) {
    const node_index l = t.first_child(v);
    if (l == nil_node) continue;
    const node_index rgt = t.next_sibling(l);
    owned[v]->left = std::move(owned[l]);
    owned[v]->right = std::move(owned[rgt]);
  }
  auto root = std::move(owned[t.root()]);

  detail::obin_tallies tallies;
  std::vector<detail::path_pair> path;
  detail::tally_obin(root.get(), k, pad.pad_label(), path, tallies);
  double h = 0;
  for (const auto& [key, cnt] : tallies.m_zlam)
    h += static_cast<double>(cnt) *
         std::log2(static_cast<double>(tallies.m_z[key.first]) / static_cast<double>(cnt));
  return h;
}

}  // namespace treent::oracle

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tree.hpp"

namespace treent {

/// Binary chain family: member 1 is a single leaf, member n is a root whose
/// left subtree is member n-1 and whose right child is a leaf. All labels "a",
/// size 2n - 1.
inline binary_tree left_chain(std::uint64_t n, alphabet& sigma) {
  if (n == 0) throw std::invalid_argument("left_chain: n must be positive");
  const label_id a = sigma.intern("a");
  tree_builder b;
  b.reserve(2 * n - 1);
  std::vector<node_index> spine(n);
  spine[0] = b.add_root(a);
  for (std::uint64_t i = 1; i < n; ++i)
    spine[i] = b.add_child(spine[i - 1], a);
  for (std::uint64_t i = n - 1; i-- > 0;)
    b.add_child(spine[i], a);
  return binary_tree(b.take());
}

/// Star family: root "a" with 2n leaf children labeled "b", "c" alternating.
/// Size 2n + 1.
inline tree comb(std::uint64_t n, alphabet& sigma) {
  if (n == 0) throw std::invalid_argument("comb: n must be positive");
  const label_id a = sigma.intern("a");
  const label_id bb = sigma.intern("b");
  const label_id cc = sigma.intern("c");
  tree_builder b;
  b.reserve(2 * n + 1);
  const node_index root = b.add_root(a);
  for (std::uint64_t i = 0; i < 2 * n; ++i)
    b.add_child(root, i % 2 == 0 ? bb : cc);
  return b.take();
}

/// Two-branch family: root "a" with children "b" and "c"; "b" carries n leaf
/// children "d"; "c" carries n children "d", each with one leaf child "e".
/// Size 3n + 3.
inline tree two_branch(std::uint64_t n, alphabet& sigma) {
  if (n == 0) throw std::invalid_argument("two_branch: n must be positive");
  const label_id a = sigma.intern("a");
  const label_id lb = sigma.intern("b");
  const label_id lc = sigma.intern("c");
  const label_id ld = sigma.intern("d");
  const label_id le = sigma.intern("e");
  tree_builder b;
  b.reserve(3 * n + 3);
  const node_index root = b.add_root(a);
  const node_index nb = b.add_child(root, lb);
  const node_index nc = b.add_child(root, lc);
  for (std::uint64_t i = 0; i < n; ++i) b.add_child(nb, ld);
  for (std::uint64_t i = 0; i < n; ++i) {
    const node_index d = b.add_child(nc, ld);
    b.add_child(d, le);
  }
  return b.take();
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw std::overflow_error(std::string(what) + ": size overflows 64 bits");
  return a * b;
}

/// Falling factorial n * (n-1) * ... * (n-k+1).
inline std::uint64_t falling_factorial(std::uint64_t n, std::uint32_t k) {
  std::uint64_t p = 1;
  for (std::uint32_t i = 0; i < k; ++i)
    p = checked_mul(p, n - i, "falling_factorial");
  return p;
}

}  // namespace detail

/// Size of the permutation family member: 1 root, one branch node per k-tuple
/// of distinct values from [n], and k*n leaf children under each branch node.
inline std::uint64_t permutation_family_size(std::uint64_t n, std::uint32_t k) {
  if (n == 0 || k == 0 || k > n)
    throw std::invalid_argument("permutation_family: need n >= k >= 1");
  const std::uint64_t tuples = detail::falling_factorial(n, k);
  const std::uint64_t per = detail::checked_mul(detail::checked_mul(k, n, "permutation_family"),
                                                tuples, "permutation_family");
  const std::uint64_t total = 1 + tuples + per;
  if (total >= nil_node)
    throw std::overflow_error("permutation_family: size " + std::to_string(total) +
                              " exceeds the node index limit " + std::to_string(nil_node - 1));
  return total;
}

/// Root "a"; one child "b_<u>" per k-tuple u of distinct values from [n], in
/// lexicographic order; each such node carries the leaf sequence
/// c_{u1} ... c_{uk} repeated n times. Tuple indices are 1-based and joined
/// with '.' in labels so the names stay valid in both term and XML syntax.
inline tree permutation_family(std::uint64_t n, std::uint32_t k, alphabet& sigma) {
  const std::uint64_t total = permutation_family_size(n, k);
  const label_id a = sigma.intern("a");
  std::vector<label_id> c(n);
  for (std::uint64_t i = 0; i < n; ++i) c[i] = sigma.intern("c_" + std::to_string(i + 1));

  tree_builder b;
  b.reserve(total);
  const node_index root = b.add_root(a);

  std::vector<std::uint64_t> u(k);  // current tuple, 0-based values
  std::vector<bool> used(n, false);
  // Depth-first lexicographic enumeration of injective k-tuples.
  std::uint32_t depth = 0;
  std::vector<std::uint64_t> next(k, 0);
  while (true) {
    if (depth == k) {
      std::string name = "b_";
      for (std::uint32_t i = 0; i < k; ++i) {
        if (i > 0) name += '.';
        name += std::to_string(u[i] + 1);
      }
      const node_index bu = b.add_child(root, sigma.intern(name));
      for (std::uint64_t rep = 0; rep < n; ++rep)
        for (std::uint32_t i = 0; i < k; ++i) b.add_child(bu, c[u[i]]);
      --depth;
      used[u[depth]] = false;
      continue;
    }
    bool advanced = false;
    for (std::uint64_t v = next[depth]; v < n; ++v) {
      if (used[v]) continue;
      u[depth] = v;
      used[v] = true;
      next[depth] = v + 1;
      ++depth;
      if (depth < k) next[depth] = 0;
      advanced = true;
      break;
    }
    if (!advanced) {
      if (depth == 0) break;
      next[depth] = 0;
      --depth;
      used[u[depth]] = false;
    }
  }
  return b.take();
}

enum class family_kind { left_chain, comb, two_branch, permutation };

inline const char* family_name(family_kind f) {
  switch (f) {
    case family_kind::left_chain: return "left_chain";
    case family_kind::comb: return "comb";
    case family_kind::two_branch: return "two_branch";
    case family_kind::permutation: return "permutation";
  }
  return "?";
}

inline family_kind family_from_name(const std::string& name) {
  if (name == "left_chain") return family_kind::left_chain;
  if (name == "comb") return family_kind::comb;
  if (name == "two_branch") return family_kind::two_branch;
  if (name == "permutation") return family_kind::permutation;
  throw std::invalid_argument("unknown family: " + name +
                              " (expected left_chain, comb, two_branch or permutation)");
}

enum class bound_kind { exact, lower, upper };

/// A predicted value for one report quantity at one history length, valid
/// when the tree is analyzed with the in-alphabet pad symbol "a".
struct closed_form {
  const char* quantity;  // entropy_report field name, e.g. "h_shape"
  std::uint32_t k;       // history length the prediction applies to
  double value;
  bound_kind kind;
};

namespace detail {

inline double nlog2frac(double num, double den) {
  return den == 0 ? 0.0 : den * std::log2(num / den);
}

/// Degree entropy of an explicit degree histogram.
inline double histogram_entropy(const std::map<std::uint64_t, std::uint64_t>& hist) {
  std::uint64_t n = 0;
  for (const auto& [deg, cnt] : hist) n += cnt;
  double h = 0;
  for (const auto& [deg, cnt] : hist)
    h += static_cast<double>(cnt) *
         std::log2(static_cast<double>(n) / static_cast<double>(cnt));
  return h;
}

}  // namespace detail

/// Predicted quantities for family members. Throws domain_error outside the
/// k range each prediction is stated for.
inline std::vector<closed_form> closed_forms(family_kind f, std::uint64_t n, std::uint32_t k) {
  std::vector<closed_form> out;
  switch (f) {
    case family_kind::left_chain: {
      if (n == 0) throw std::invalid_argument("left_chain: n must be positive");
      if (k < 1 || k > n) throw std::domain_error("left_chain forms need 1 <= k <= n");
      const double dn = static_cast<double>(n);
      const double h_shape = (n == 1) ? 0.0 : std::log2(dn) + detail::nlog2frac(dn, dn - 1);
      const double h_deg =
          detail::histogram_entropy({{0, n}, {2, n - 1}});  // merges to {{0,1}} at n=1
      out.push_back({"h_shape", k, h_shape, bound_kind::exact});
      out.push_back({"h_shape", k, std::log2(std::exp(1.0) * dn), bound_kind::upper});
      out.push_back({"h_deg", k, h_deg, bound_kind::exact});
      out.push_back({"h_labeldeg", k, h_deg, bound_kind::exact});
      out.push_back({"h_label", k, 0.0, bound_kind::exact});
      out.push_back({"h_deglabel", k, 0.0, bound_kind::exact});
      break;
    }
    case family_kind::comb: {
      if (n == 0) throw std::invalid_argument("comb: n must be positive");
      if (k < 1 || k > 2 * n) throw std::domain_error("comb forms need 1 <= k <= 2n");
      const double dn = static_cast<double>(n);
      const double np = static_cast<double>(n - (k - 1) / 2);
      const double sz = static_cast<double>(2 * n + 1);
      out.push_back({"h_shape", k, detail::nlog2frac(np, np - 1) + std::log2(np) + 2,
                     bound_kind::exact});
      out.push_back({"h_shape", k, std::log2(std::exp(1.0)) + std::log2(np) + 2,
                     bound_kind::upper});
      out.push_back({"h_deg", k, detail::histogram_entropy({{0, 2 * n}, {2 * n, 1}}),
                     bound_kind::exact});
      out.push_back({"h_label", k, std::log2(sz) + 2 * detail::nlog2frac(sz, dn),
                     bound_kind::exact});
      out.push_back({"h_labeldeg", k, 0.0, bound_kind::exact});
      out.push_back({"h_deglabel", k, 2 * dn, bound_kind::exact});
      break;
    }
    case family_kind::two_branch: {
      if (n == 0) throw std::invalid_argument("two_branch: n must be positive");
      if (k < 1 || k > n) throw std::domain_error("two_branch forms need 1 <= k <= n");
      const double dn = static_cast<double>(n);
      std::map<std::uint64_t, std::uint64_t> hist;
      hist[2] += 1;
      hist[n] += 2;
      hist[1] += n;
      hist[0] += 2 * n;
      const double h_deg = detail::histogram_entropy(hist);
      const double h_deglabel = (n == 2) ? 3 * std::log2(3.0) : 2.0;
      out.push_back({"h_label", k, 3 * std::log2(3.0), bound_kind::exact});
      out.push_back({"h_labeldeg", k, 0.0, bound_kind::exact});
      out.push_back({"h_deg", k, h_deg, bound_kind::exact});
      out.push_back({"h_deglabel", k, h_deglabel, bound_kind::exact});
      out.push_back({"h_shape", k, 2 * (dn - k + 1), bound_kind::lower});
      out.push_back({"h_deg_plus_deglabel", k, 2 * dn, bound_kind::lower});
      break;
    }
    case family_kind::permutation: {
      if (n == 0 || k == 0 || k > n)
        throw std::invalid_argument("permutation forms need n >= k >= 1");
      const double dn = static_cast<double>(n);
      const double dk = static_cast<double>(k);
      const double tuples = static_cast<double>(detail::falling_factorial(n, k));
      const double weight = dn + (dn - 1) * (dk - 1);
      const double bound =
          tuples * (weight * std::log2(dn - dk + 1) + std::log2(weight + 1));
      // Prediction applies to history length k - 1.
      out.push_back({"h_shape", k - 1, bound, bound_kind::lower});
      break;
    }
  }
  return out;
}

struct random_tree_params {
  std::uint64_t seed = 0;
  std::uint32_t max_size = 300;
  std::uint32_t sigma = 5;  // labels drawn uniformly from "a", "b", ...
  bool binary = false;
};

/// Deterministic random tree: the target size is uniform in [1, max_size],
/// then a queue of open nodes spawns children geometrically (mean 2) until
/// the budget runs out. Binary mode spends the budget two children at a time,
/// so every degree is 0 or 2.
inline tree random_tree(const random_tree_params& p, alphabet& sigma) {
  if (p.max_size == 0) throw std::invalid_argument("random_tree: max_size must be positive");
  if (p.sigma == 0 || p.sigma > 26)
    throw std::invalid_argument("random_tree: sigma must be in [1, 26]");
  std::mt19937_64 rng(p.seed);
  std::vector<label_id> labels(p.sigma);
  for (std::uint32_t i = 0; i < p.sigma; ++i)
    labels[i] = sigma.intern(std::string(1, static_cast<char>('a' + i)));
  auto pick = [&]() { return labels[rng() % p.sigma]; };

  const std::uint64_t target = 1 + rng() % p.max_size;
  std::uint64_t remaining = target - 1;
  if (p.binary) remaining -= remaining % 2;

  tree_builder b;
  b.reserve(target);
  std::vector<node_index> open;
  open.push_back(b.add_root(pick()));
  std::size_t head = 0;
  while (head < open.size() && remaining > 0) {
    const node_index v = open[head++];
    if (p.binary) {
      if (rng() % 2 == 0) continue;  // leaf
      remaining -= 2;
      open.push_back(b.add_child(v, pick()));
      open.push_back(b.add_child(v, pick()));
    } else {
      while (remaining > 0 && rng() % 3 != 0) {
        --remaining;
        open.push_back(b.add_child(v, pick()));
      }
    }
  }
  return b.take();
}

inline binary_tree random_binary_tree(random_tree_params p, alphabet& sigma) {
  p.binary = true;
  return binary_tree(random_tree(p, sigma));
}

}  // namespace treent

#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "families.hpp"
#include "tree.hpp"

namespace treent {

/// Comparison slack for checked identities and inequalities.
inline double check_tolerance(double a, double b) {
  return 1e-6 + 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct suite_result {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::string first_counterexample;

  bool ok() const { return failures == 0; }
};

struct verify_summary {
  std::vector<suite_result> suites;

  bool ok() const {
    for (const auto& s : suites)
      if (!s.ok()) return false;
    return true;
  }

  std::uint64_t total_checks() const {
    std::uint64_t n = 0;
    for (const auto& s : suites) n += s.checks;
    return n;
  }

  std::uint64_t total_failures() const {
    std::uint64_t n = 0;
    for (const auto& s : suites) n += s.failures;
    return n;
  }
};

struct verify_params {
  std::uint64_t trials = 1000;
  std::uint32_t max_size = 300;
  std::uint32_t sigma = 5;
  std::uint32_t k_max = 4;
  std::uint64_t seed = 42;
  bool general = true;    // labeled unranked trees
  bool unlabeled = true;  // single-label trees
  bool binary = true;     // trees with degrees 0 and 2
};

namespace detail {

class suite_set {
 public:
  std::size_t add(std::string name) {
    suites_.push_back({std::move(name), 0, 0, {}});
    return suites_.size() - 1;
  }

  /// Records one check of lhs <= rhs (or |lhs - rhs| small when equality).
  void check(std::size_t idx, double lhs, double rhs, bool equality,
             const std::string& context) {
    suite_result& s = suites_[idx];
    s.checks += 1;
    const double tol = check_tolerance(lhs, rhs);
    const bool good = equality ? std::abs(lhs - rhs) <= tol : lhs <= rhs + tol;
    if (good) return;
    s.failures += 1;
    if (s.first_counterexample.empty()) {
      std::ostringstream os;
      os << context << ": lhs=" << lhs << " rhs=" << rhs;
      s.first_counterexample = os.str();
    }
  }

  std::vector<suite_result> take() { return std::move(suites_); }

 private:
  std::vector<suite_result> suites_;
};

inline std::string pad_name(const pad_policy& pad, const alphabet& sigma) {
  if (pad.is_sentinel()) return "sentinel";
  return "pad=" + std::string(sigma.text(pad.pad_label()));
}

}  // namespace detail

/// Randomized checks of every relation the report quantities satisfy on all
/// trees. Each tree runs under both pad conventions; any failure carries the
/// first counterexample as a term.
inline verify_summary run_inequality_suites(const verify_params& p) {
  detail::suite_set suites;
  const std::size_t s_labeldeg_le_deg = suites.add("H_labeldeg <= H_deg");
  const std::size_t s_deglabel_le_label = suites.add("H_deglabel <= H_label");
  const std::size_t s_pair_le =
      suites.add("H_label + H_labeldeg <= H_deg + H_deglabel");
  const std::size_t s_mid_le = suites.add("H_deg + H_deglabel <= H_deg + H_label");
  const std::size_t s_upper_le =
      suites.add("H_deg + H_label <= 2*H_deg + H_deglabel");
  const std::size_t s_nonneg = suites.add("all report quantities >= 0");
  const std::size_t s_k0_identity =
      suites.add("k=0: H_label + H_labeldeg == H_deg + H_deglabel");
  const std::size_t s_unlab_label = suites.add("single label: H_label == 0");
  const std::size_t s_unlab_deglabel = suites.add("single label: H_deglabel == 0");
  const std::size_t s_shape_vs_deg =
      suites.add("single label, k>=1: H_shape <= 2*H_deg + 2*log2(n) + 4");
  const std::size_t s_bin_label =
      suites.add("binary: H_shape <= H_label + H_labeldeg");
  const std::size_t s_bin_deg = suites.add("binary: H_shape <= H_deg + H_deglabel");
  // The encoding comparison needs the fresh pad symbol: an in-alphabet pad
  // can merge padded windows with genuine ones and push the encoding side
  // above the bound (smallest case: the one-node tree padded with its own
  // label).
  const std::size_t s_enc_2 = suites.add("binary, sentinel pad: encoding H_2 <= direct H_0");
  const std::size_t s_enc_4 = suites.add("binary, sentinel pad: encoding H_4 <= direct H_1");

  for (std::uint64_t trial = 0; trial < p.trials; ++trial) {
    if (p.general) {
      alphabet sigma;
      random_tree_params rp;
      rp.seed = p.seed + trial;
      rp.max_size = p.max_size;
      rp.sigma = p.sigma;
      const tree t = random_tree(rp, sigma);
      const pad_policy pads[2] = {pad_policy::sentinel(),
                                  pad_policy::in_alphabet(sigma.intern("a"))};
      for (const pad_policy& pad : pads) {
        const binary_tree enc = fcns(t, pad);
        for (std::uint32_t k = 0; k <= p.k_max; ++k) {
          const entropy_report r = report(t, enc, k, pad);
          std::ostringstream ctx;
          ctx << detail::pad_name(pad, sigma) << " k=" << k << " t=" << to_term(t, sigma);
          const std::string c = ctx.str();
          suites.check(s_labeldeg_le_deg, r.h_labeldeg, r.h_deg, false, c);
          suites.check(s_deglabel_le_label, r.h_deglabel, r.h_label, false, c);
          suites.check(s_pair_le, r.h_label_plus_labeldeg(), r.h_deg_plus_deglabel(),
                       false, c);
          suites.check(s_mid_le, r.h_deg_plus_deglabel(), r.h_deg_plus_label(), false, c);
          suites.check(s_upper_le, r.h_deg_plus_label(), r.h_deg + r.h_deg_plus_deglabel(),
                       false, c);
          const double least = std::min(
              {r.h_shape, r.h_deg, r.h_label, r.h_labeldeg, r.h_deglabel});
          suites.check(s_nonneg, 0.0, least, false, c);
          if (k == 0)
            suites.check(s_k0_identity, r.h_label_plus_labeldeg(),
                         r.h_deg_plus_deglabel(), true, c);
        }
      }
    }

    if (p.unlabeled) {
      alphabet sigma;
      random_tree_params rp;
      rp.seed = p.seed + 0x9e3779b97f4a7c15ull + trial;
      rp.max_size = p.max_size;
      rp.sigma = 1;
      const tree t = random_tree(rp, sigma);
      const pad_policy pads[2] = {pad_policy::sentinel(),
                                  pad_policy::in_alphabet(sigma.intern("a"))};
      for (const pad_policy& pad : pads) {
        const binary_tree enc = fcns(t, pad);
        for (std::uint32_t k = 0; k <= p.k_max; ++k) {
          const entropy_report r = report(t, enc, k, pad);
          std::ostringstream ctx;
          ctx << detail::pad_name(pad, sigma) << " k=" << k << " t=" << to_term(t, sigma);
          const std::string c = ctx.str();
          suites.check(s_unlab_label, r.h_label, 0.0, true, c);
          suites.check(s_unlab_deglabel, r.h_deglabel, 0.0, true, c);
          if (k >= 1 && t.size() >= 2)
            suites.check(s_shape_vs_deg, r.h_shape,
                         2 * r.h_deg + 2 * std::log2(static_cast<double>(t.size())) + 4,
                         false, c);
        }
      }
    }

    if (p.binary) {
      alphabet sigma;
      random_tree_params rp;
      rp.seed = p.seed + 2 * 0x9e3779b97f4a7c15ull + trial;
      rp.max_size = p.max_size;
      rp.sigma = p.sigma;
      const binary_tree bt = random_binary_tree(rp, sigma);
      const tree& t = bt.as_tree();
      const pad_policy pads[2] = {pad_policy::sentinel(),
                                  pad_policy::in_alphabet(sigma.intern("a"))};
      for (const pad_policy& pad : pads) {
        for (std::uint32_t k = 0; k <= p.k_max; ++k) {
          const unranked_counts uc = label_history_counts(t, k, pad);
          const double h_direct = shape_entropy_binary(bt, k, pad);
          std::ostringstream ctx;
          ctx << detail::pad_name(pad, sigma) << " k=" << k << " t=" << to_term(t, sigma);
          const std::string c = ctx.str();
          suites.check(s_bin_label, h_direct,
                       label_entropy(uc) + label_degree_entropy(uc), false, c);
          suites.check(s_bin_deg, h_direct,
                       degree_entropy(uc) + degree_label_entropy(uc), false, c);
        }
      }
      const pad_policy sent = pad_policy::sentinel();
      const std::string c = "t=" + to_term(t, sigma);
      suites.check(s_enc_2, shape_entropy_unranked(t, 2, sent),
                   shape_entropy_binary(bt, 0, sent), false, c);
      suites.check(s_enc_4, shape_entropy_unranked(t, 4, sent),
                   shape_entropy_binary(bt, 1, sent), false, c);
    }
  }

  verify_summary out;
  out.suites = suites.take();
  return out;
}

struct family_check_params {
  std::uint64_t comb_max_n = 50;
  std::uint64_t two_branch_max_n = 50;
  std::uint64_t left_chain_max_n = 200;
  std::uint64_t permutation_max_n = 6;
  std::uint32_t permutation_max_k = 3;
  std::uint32_t k_cap = 10;
};

namespace detail {

inline double report_value(const entropy_report& r, const std::string& quantity) {
  if (quantity == "h_shape") return r.h_shape;
  if (quantity == "h_deg") return r.h_deg;
  if (quantity == "h_label") return r.h_label;
  if (quantity == "h_labeldeg") return r.h_labeldeg;
  if (quantity == "h_deglabel") return r.h_deglabel;
  if (quantity == "h_deg_plus_label") return r.h_deg_plus_label();
  if (quantity == "h_label_plus_labeldeg") return r.h_label_plus_labeldeg();
  if (quantity == "h_deg_plus_deglabel") return r.h_deg_plus_deglabel();
  throw std::invalid_argument("unknown report quantity: " + quantity);
}

inline void check_forms(suite_set& suites, std::size_t idx, const entropy_report& r,
                        const std::vector<closed_form>& forms, const std::string& context) {
  for (const closed_form& f : forms) {
    if (f.k != r.k) continue;
    const double got = report_value(r, f.quantity);
    std::ostringstream ctx;
    ctx << context << " " << f.quantity;
    switch (f.kind) {
      case bound_kind::exact: suites.check(idx, got, f.value, true, ctx.str()); break;
      case bound_kind::lower: suites.check(idx, f.value, got, false, ctx.str()); break;
      case bound_kind::upper: suites.check(idx, got, f.value, false, ctx.str()); break;
    }
  }
}

}  // namespace detail

/// Checks every family member against its predicted values, with the
/// in-alphabet pad symbol the predictions assume.
inline verify_summary run_family_checks(const family_check_params& p = {}) {
  detail::suite_set suites;
  const std::size_t s_left = suites.add("left_chain predicted values");
  const std::size_t s_comb = suites.add("comb predicted values");
  const std::size_t s_two = suites.add("two_branch predicted values");
  const std::size_t s_perm = suites.add("permutation predicted values");
  const std::size_t s_perm_size = suites.add("permutation size formula");

  for (std::uint64_t n = 2; n <= p.left_chain_max_n; ++n) {
    alphabet sigma;
    const binary_tree bt = left_chain(n, sigma);
    const pad_policy pad = pad_policy::in_alphabet(sigma.intern("a"));
    const binary_tree enc = fcns(bt.as_tree(), pad);
    const std::uint32_t k_hi = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(p.k_cap, n));
    for (std::uint32_t k = 1; k <= k_hi; ++k) {
      entropy_report r = report(bt.as_tree(), enc, k, pad);
      r.h_shape = shape_entropy_binary(bt, k, pad);  // predictions are for the direct form
      std::ostringstream ctx;
      ctx << "left_chain n=" << n << " k=" << k;
      detail::check_forms(suites, s_left, r, closed_forms(family_kind::left_chain, n, k),
                          ctx.str());
    }
  }

  for (std::uint64_t n = 1; n <= p.comb_max_n; ++n) {
    alphabet sigma;
    const tree t = comb(n, sigma);
    const pad_policy pad = pad_policy::in_alphabet(sigma.intern("a"));
    const binary_tree enc = fcns(t, pad);
    const std::uint32_t k_hi = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(p.k_cap, 2 * n));
    for (std::uint32_t k = 1; k <= k_hi; ++k) {
      const entropy_report r = report(t, enc, k, pad);
      std::ostringstream ctx;
      ctx << "comb n=" << n << " k=" << k;
      detail::check_forms(suites, s_comb, r, closed_forms(family_kind::comb, n, k),
                          ctx.str());
    }
  }

  for (std::uint64_t n = 1; n <= p.two_branch_max_n; ++n) {
    alphabet sigma;
    const tree t = two_branch(n, sigma);
    const pad_policy pad = pad_policy::in_alphabet(sigma.intern("a"));
    const binary_tree enc = fcns(t, pad);
    const std::uint32_t k_hi = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(p.k_cap, n));
    for (std::uint32_t k = 1; k <= k_hi; ++k) {
      const entropy_report r = report(t, enc, k, pad);
      std::ostringstream ctx;
      ctx << "two_branch n=" << n << " k=" << k;
      detail::check_forms(suites, s_two, r, closed_forms(family_kind::two_branch, n, k),
                          ctx.str());
    }
  }

  for (std::uint64_t n = 1; n <= p.permutation_max_n; ++n) {
    for (std::uint32_t k = 1; k <= p.permutation_max_k && k <= n; ++k) {
      alphabet sigma;
      const tree t = permutation_family(n, k, sigma);
      std::ostringstream ctx;
      ctx << "permutation n=" << n << " k=" << k;
      suites.check(s_perm_size, static_cast<double>(t.size()),
                   static_cast<double>(permutation_family_size(n, k)), true, ctx.str());
      const pad_policy pad = pad_policy::in_alphabet(sigma.intern("a"));
      const entropy_report r = report(t, k - 1, pad);
      detail::check_forms(suites, s_perm, r, closed_forms(family_kind::permutation, n, k),
                          ctx.str());
    }
  }

  verify_summary out;
  out.suites = suites.take();
  return out;
}

}  // namespace treent

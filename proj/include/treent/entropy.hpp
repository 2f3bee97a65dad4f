#pragma once

#include <cmath>
#include <cstdint>

#include "histories.hpp"
#include "tree.hpp"

namespace treent {

/// All entropies are unnormalized and measured in bits (base-2 logs).
using bits = double;

namespace detail {

/// Compensated (Neumaier) summation; keeps entropy sums stable on
/// multi-million-term inputs.
class neumaier_sum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// H over the degree distribution: sum over occurring degrees i of
/// n_i * log2(|t| / n_i).
inline bits degree_entropy(const unranked_counts& c) {
  detail::neumaier_sum s;
  const double n = static_cast<double>(c.total);
  for (std::int64_t cnt : c.n_i.counts())
    s.add(static_cast<double>(cnt) * std::log2(n / static_cast<double>(cnt)));
  return s.value();
}

inline bits degree_entropy(const tree& t) {
  if (t.empty()) return 0.0;
  detail::neumaier_sum s;
  const double n = static_cast<double>(t.size());
  for (const auto& [deg, cnt] : t.degree_histogram())
    s.add(static_cast<double>(cnt) * std::log2(n / static_cast<double>(cnt)));
  return s.value();
}

/// Label entropy conditioned on k-label-histories: sum over (z, a) of
/// n_{z,a} * log2(n_z / n_{z,a}).
inline bits label_entropy(const unranked_counts& c) {
  detail::neumaier_sum s;
  const auto& keys = c.n_za.keys();
  const auto& counts = c.n_za.counts();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double nz = static_cast<double>(c.n_z[keys[i] >> 32]);
    s.add(static_cast<double>(counts[i]) * std::log2(nz / static_cast<double>(counts[i])));
  }
  return s.value();
}

/// Degree entropy conditioned on (history, label): sum over (z, i, a) of
/// n_{z,i,a} * log2(n_{z,a} / n_{z,i,a}).
inline bits label_degree_entropy(const unranked_counts& c) {
  detail::neumaier_sum s;
  const auto& keys = c.n_zia.keys();
  const auto& counts = c.n_zia.counts();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double nza = static_cast<double>(c.n_za.counts()[keys[i] >> 32]);
    s.add(static_cast<double>(counts[i]) * std::log2(nza / static_cast<double>(counts[i])));
  }
  return s.value();
}

/// Label entropy conditioned on (history, degree): sum over (z, i, a) of
/// n_{z,i,a} * log2(n_{z,i} / n_{z,i,a}).
inline bits degree_label_entropy(const unranked_counts& c) {
  detail::neumaier_sum s;
  const auto& keys = c.n_zia.keys();
  const auto& counts = c.n_zia.counts();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint32_t za_id = static_cast<std::uint32_t>(keys[i] >> 32);
    const std::uint64_t deg = keys[i] & 0xffffffffull;
    const std::uint64_t zid = c.n_za.keys()[za_id] >> 32;
    const double nzi = static_cast<double>(c.n_zi.count((zid << 32) | deg));
    s.add(static_cast<double>(counts[i]) * std::log2(nzi / static_cast<double>(counts[i])));
  }
  return s.value();
}

inline bits label_entropy(const tree& t, std::uint32_t k, pad_policy pad) {
  return label_entropy(label_history_counts(t, k, pad));
}

inline bits label_degree_entropy(const tree& t, std::uint32_t k, pad_policy pad) {
  return label_degree_entropy(label_history_counts(t, k, pad));
}

inline bits degree_label_entropy(const tree& t, std::uint32_t k, pad_policy pad) {
  return degree_label_entropy(label_history_counts(t, k, pad));
}

/// Label-shape entropy of a binary tree: sum over (z, lambda) of
/// m_{z,lambda} * log2(m_z / m_{z,lambda}) where z ranges over k-histories
/// and lambda = (label, degree).
inline bits shape_entropy(const binary_counts& c) {
  detail::neumaier_sum s;
  const auto& keys = c.m_zlam.keys();
  const auto& counts = c.m_zlam.counts();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double mz = static_cast<double>(c.m_z[keys[i] >> 33]);
    s.add(static_cast<double>(counts[i]) * std::log2(mz / static_cast<double>(counts[i])));
  }
  return s.value();
}

inline bits shape_entropy_binary(const binary_tree& b, std::uint32_t k, pad_policy pad) {
  return shape_entropy(full_history_counts(b, k, pad));
}

/// Label-shape entropy of an unranked tree, defined through its fcns encoding.
inline bits shape_entropy_unranked(const tree& t, std::uint32_t k, pad_policy pad) {
  return shape_entropy_binary(fcns(t, pad), k, pad);
}

struct entropy_report {
  std::uint32_t k = 0;
  std::uint64_t size = 0;
  bits h_shape = 0;     // H_k, via fcns for unranked input
  bits h_deg = 0;       // H^deg
  bits h_label = 0;     // H^l_k
  bits h_labeldeg = 0;  // H^{l,deg}_k
  bits h_deglabel = 0;  // H^{deg,l}_k

  bits h_deg_plus_label() const { return h_deg + h_label; }
  bits h_label_plus_labeldeg() const { return h_label + h_labeldeg; }
  bits h_deg_plus_deglabel() const { return h_deg + h_deglabel; }

  double per_n(bits h) const { return size == 0 ? 0.0 : h / static_cast<double>(size); }
};

/// Computes all report quantities with one label-history pass over t and one
/// full-history pass over a previously built fcns encoding.
inline entropy_report report(const tree& t, const binary_tree& encoding, std::uint32_t k,
                             pad_policy pad) {
  entropy_report r;
  r.k = k;
  r.size = t.size();
  unranked_counts uc = label_history_counts(t, k, pad);
  r.h_deg = degree_entropy(uc);
  r.h_label = label_entropy(uc);
  r.h_labeldeg = label_degree_entropy(uc);
  r.h_deglabel = degree_label_entropy(uc);
  r.h_shape = shape_entropy(full_history_counts(encoding, k, pad));
  return r;
}

inline entropy_report report(const tree& t, std::uint32_t k, pad_policy pad) {
  return report(t, fcns(t, pad), k, pad);
}

}  // namespace treent

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "treent/entropy.hpp"
#include "treent/families.hpp"
#include "treent/tree.hpp"

using namespace treent;
using Catch::Approx;

TEST_CASE("left chain members") {
  alphabet sigma;
  REQUIRE(to_term(left_chain(1, sigma).as_tree(), sigma) == "a");
  REQUIRE(to_term(left_chain(2, sigma).as_tree(), sigma) == "a(a a)");
  REQUIRE(to_term(left_chain(6, sigma).as_tree(), sigma) ==
          "a(a(a(a(a(a a) a) a) a) a)");
  for (std::uint64_t n : {1ull, 2ull, 7ull, 40ull}) {
    const binary_tree bt = left_chain(n, sigma);
    REQUIRE(bt.size() == 2 * n - 1);
    REQUIRE(bt.as_tree().is_preorder());
  }
  REQUIRE_THROWS_AS(left_chain(0, sigma), std::invalid_argument);
}

TEST_CASE("left chain shape entropy is flat in k") {
  alphabet sigma;
  const binary_tree bt = left_chain(4, sigma);
  const pad_policy pad = pad_policy::in_alphabet(sigma.find("a").value());
  for (std::uint32_t k : {1u, 2u, 3u, 4u})
    REQUIRE(shape_entropy_binary(bt, k, pad) ==
            Approx(3.2451124978365313).margin(1e-12));

  // A chain's history class is uniform, so conditioning on it is free.
  const tree& t = bt.as_tree();
  for (std::uint32_t k : {1u, 3u})
    REQUIRE(label_degree_entropy(t, k, pad) == Approx(degree_entropy(t)).margin(1e-9));
}

TEST_CASE("comb members") {
  alphabet sigma;
  const tree t3 = comb(3, sigma);
  REQUIRE(t3.size() == 7);
  REQUIRE(to_term(t3, sigma) == "a(b c b c b c)");
  REQUIRE(comb(1, sigma).size() == 3);
  REQUIRE(comb(50, sigma).size() == 101);
  REQUIRE_THROWS_AS(comb(0, sigma), std::invalid_argument);
}

TEST_CASE("comb entropies against predictions") {
  alphabet sigma;
  const tree t = comb(3, sigma);
  const pad_policy pad = pad_policy::in_alphabet(sigma.find("a").value());
  const binary_tree enc = fcns(t, pad);

  REQUIRE(shape_entropy(full_history_counts(enc, 2, pad)) ==
          Approx(4.7548875021).epsilon(1e-9));
  for (std::uint32_t k : {1u, 2u, 3u, 4u, 5u, 6u}) {
    const entropy_report r = report(t, enc, k, pad);
    // Conditioned on history and label, degrees are fixed; conditioned on
    // history and degree, the 2n leaves split evenly into b and c.
    REQUIRE(r.h_labeldeg == Approx(0.0).margin(1e-12));
    REQUIRE(r.h_deglabel == 6.0);  // exact: 2n * log2(2)
    for (const closed_form& f : closed_forms(family_kind::comb, 3, k)) {
      const double got = [&] {
        if (std::string(f.quantity) == "h_shape") return r.h_shape;
        if (std::string(f.quantity) == "h_deg") return r.h_deg;
        if (std::string(f.quantity) == "h_label") return r.h_label;
        if (std::string(f.quantity) == "h_labeldeg") return r.h_labeldeg;
        return r.h_deglabel;
      }();
      if (f.kind == bound_kind::exact) REQUIRE(got == Approx(f.value).margin(1e-9));
      if (f.kind == bound_kind::upper) REQUIRE(got <= f.value + 1e-9);
      if (f.kind == bound_kind::lower) REQUIRE(got >= f.value - 1e-9);
    }
  }

  // Degenerate tail of the prediction range: one window class remains.
  const tree t1 = comb(1, sigma);
  REQUIRE(report(t1, 1, pad).h_shape == Approx(2.0).margin(1e-12));
}

TEST_CASE("two branch members") {
  alphabet sigma;
  const tree t = two_branch(2, sigma);
  REQUIRE(to_term(t, sigma) == "a(b(d d) c(d(e) d(e)))");
  REQUIRE(t.size() == 3 * 2 + 3);
  const tree t1 = two_branch(1, sigma);
  const auto hist = t1.degree_histogram();
  REQUIRE(hist.at(2) == 1);
  REQUIRE(hist.at(1) == 3);  // degree buckets n=1 and 1 merge
  REQUIRE(hist.at(0) == 2);
  REQUIRE_THROWS_AS(two_branch(0, sigma), std::invalid_argument);
}

TEST_CASE("two branch entropies against predictions") {
  for (std::uint64_t n : {1ull, 2ull, 3ull, 8ull}) {
    alphabet sigma;
    const tree t = two_branch(n, sigma);
    const pad_policy pad = pad_policy::in_alphabet(sigma.find("a").value());
    for (std::uint32_t k = 1; k <= std::min<std::uint64_t>(n, 4); ++k) {
      const entropy_report r = report(t, k, pad);
      REQUIRE(r.h_label == Approx(3 * std::log2(3.0)).margin(1e-9));
      REQUIRE(r.h_labeldeg == Approx(0.0).margin(1e-12));
      REQUIRE(r.h_shape >= 2.0 * (static_cast<double>(n) - k + 1) - 1e-9);
      REQUIRE(r.h_deg_plus_deglabel() >= 2.0 * static_cast<double>(n) - 1e-9);
    }
  }
}

TEST_CASE("permutation members") {
  alphabet sigma;
  const tree t = permutation_family(2, 2, sigma);
  REQUIRE(to_term(t, sigma) == "a(b_1.2(c_1 c_2 c_1 c_2) b_2.1(c_2 c_1 c_2 c_1))");
  for (std::uint64_t n = 1; n <= 5; ++n)
    for (std::uint32_t k = 1; k <= 3 && k <= n; ++k) {
      alphabet s2;
      REQUIRE(permutation_family(n, k, s2).size() == permutation_family_size(n, k));
    }
  // 1 + n!/(n-k)! branch nodes + k*n leaves under each.
  REQUIRE(permutation_family_size(4, 2) == 1 + 12 + 2 * 4 * 12);
  REQUIRE_THROWS_AS(permutation_family_size(3, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(permutation_family_size(0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(permutation_family_size(100, 10), std::overflow_error);
}

TEST_CASE("permutation lower bound on the encoding entropy") {
  for (std::uint64_t n = 2; n <= 5; ++n)
    for (std::uint32_t k = 1; k <= 3 && k <= n; ++k) {
      alphabet sigma;
      const tree t = permutation_family(n, k, sigma);
      const pad_policy pad = pad_policy::in_alphabet(sigma.find("a").value());
      const std::vector<closed_form> forms = closed_forms(family_kind::permutation, n, k);
      REQUIRE(forms.size() == 1);
      REQUIRE(forms[0].k == k - 1);
      const double h = shape_entropy_unranked(t, k - 1, pad);
      REQUIRE(h >= forms[0].value - 1e-9);
    }
}

TEST_CASE("permutation family separates the composite measures") {
  // The monitored quotient (H_deg + H_label at k=1) / (encoding H_{k-1})
  // shrinks as n grows, so no constant multiple of the right side can bound
  // the left side from below.
  double prev = 1e300;
  for (std::uint64_t n = 3; n <= 6; ++n) {
    alphabet sigma;
    const tree t = permutation_family(n, 2, sigma);
    const pad_policy pad = pad_policy::in_alphabet(sigma.find("a").value());
    const unranked_counts c = label_history_counts(t, 1, pad);
    const double num = degree_entropy(c) + label_entropy(c);
    const double den = shape_entropy_unranked(t, 1, pad);
    const double ratio = num / den;
    std::printf("permutation n=%llu k=2: (H_deg + H_label)/H_shape = %.6f\n",
                static_cast<unsigned long long>(n), ratio);
    REQUIRE(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("prediction ranges are enforced") {
  REQUIRE_THROWS_AS(closed_forms(family_kind::left_chain, 5, 0), std::domain_error);
  REQUIRE_THROWS_AS(closed_forms(family_kind::left_chain, 5, 6), std::domain_error);
  REQUIRE_THROWS_AS(closed_forms(family_kind::comb, 3, 7), std::domain_error);
  REQUIRE_THROWS_AS(closed_forms(family_kind::two_branch, 3, 4), std::domain_error);
  REQUIRE_THROWS_AS(closed_forms(family_kind::permutation, 3, 4), std::invalid_argument);
  REQUIRE_NOTHROW(closed_forms(family_kind::comb, 3, 6));
  REQUIRE_NOTHROW(closed_forms(family_kind::left_chain, 5, 5));
}

TEST_CASE("family names round trip") {
  for (family_kind f : {family_kind::left_chain, family_kind::comb, family_kind::two_branch,
                        family_kind::permutation})
    REQUIRE(family_from_name(family_name(f)) == f);
  REQUIRE_THROWS_AS(family_from_name("nope"), std::invalid_argument);
}

TEST_CASE("random trees are deterministic and bounded") {
  alphabet s1, s2;
  random_tree_params p;
  p.seed = 123;
  p.max_size = 80;
  const tree t1 = random_tree(p, s1);
  const tree t2 = random_tree(p, s2);
  REQUIRE(t1 == t2);
  REQUIRE(to_term(t1, s1) == to_term(t2, s2));

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    alphabet sigma;
    random_tree_params q;
    q.seed = seed;
    q.max_size = 60;
    const tree t = random_tree(q, sigma);
    REQUIRE(t.size() >= 1);
    REQUIRE(t.size() <= 60);
    const binary_tree bt = random_binary_tree(q, sigma);
    REQUIRE(bt.size() % 2 == 1);
    REQUIRE(bt.size() <= 60);
    REQUIRE(bt.as_tree().is_binary());
  }

  random_tree_params single;
  single.seed = 5;
  single.sigma = 1;
  alphabet sigma;
  const tree t = random_tree(single, sigma);
  for (node_index v = 0; v < t.size(); ++v) REQUIRE(t.label(v) == t.label(t.root()));

  REQUIRE_THROWS_AS(random_tree(random_tree_params{.seed = 1, .max_size = 0}, sigma),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(random_tree(random_tree_params{.seed = 1, .sigma = 0}, sigma),
                    std::invalid_argument);
}

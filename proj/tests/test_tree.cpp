#include <catch2/catch_amalgamated.hpp>

#include "treent/families.hpp"
#include "treent/tree.hpp"

using namespace treent;

TEST_CASE("alphabet interning") {
  alphabet sigma;
  REQUIRE(sigma.size() == 0);
  const label_id a = sigma.intern("a");
  const label_id b = sigma.intern("b");
  REQUIRE(a == 0);
  REQUIRE(b == 1);
  REQUIRE(sigma.intern("a") == a);
  REQUIRE(sigma.size() == 2);
  REQUIRE(sigma.text(a) == "a");
  REQUIRE(sigma.text(b) == "b");
  REQUIRE(sigma.find("a").has_value());
  REQUIRE(sigma.find("a").value() == a);
  REQUIRE_FALSE(sigma.find("zz").has_value());
  REQUIRE(sigma.text(sentinel_label) == "□");
}

TEST_CASE("pad policy") {
  const pad_policy s = pad_policy::sentinel();
  REQUIRE(s.is_sentinel());
  REQUIRE(s.pad_label() == sentinel_label);
  const pad_policy a = pad_policy::in_alphabet(3);
  REQUIRE_FALSE(a.is_sentinel());
  REQUIRE(a.pad_label() == 3);
  REQUIRE(a == pad_policy::in_alphabet(3));
  REQUIRE_FALSE(a == s);
  REQUIRE_THROWS_AS(pad_policy::in_alphabet(sentinel_label), std::invalid_argument);
}

TEST_CASE("term parsing round trips") {
  alphabet sigma;
  for (const char* term : {"a", "a(b c)", "a(b(d d) c(d(e) d(e)))", "root(x_1.2 y)",
                           "a(a(a(a(a(a a) a) a) a) a)"}) {
    const tree t = build_tree(term, sigma);
    REQUIRE(to_term(t, sigma) == term);
  }
}

TEST_CASE("term parsing tolerates whitespace") {
  alphabet sigma;
  const tree t = build_tree("  a ( b\t c\n) ", sigma);
  REQUIRE(to_term(t, sigma) == "a(b c)");
}

TEST_CASE("term parse errors carry positions") {
  alphabet sigma;
  REQUIRE_THROWS_AS(build_tree("a(b", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("a)b", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("(a)", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("a b", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("   ", sigma), parse_error);
  REQUIRE_THROWS_AS(build_tree("a(b c) d", sigma), parse_error);
}

TEST_CASE("tree accessors") {
  alphabet sigma;
  const tree t = build_tree("a(b(d d) c)", sigma);
  REQUIRE(t.size() == 5);
  REQUIRE_FALSE(t.empty());
  const node_index root = t.root();
  REQUIRE(t.parent(root) == nil_node);
  REQUIRE(t.label(root) == sigma.find("a").value());
  REQUIRE(t.degree(root) == 2);
  const node_index b = t.first_child(root);
  REQUIRE(t.label(b) == sigma.find("b").value());
  REQUIRE(t.degree(b) == 2);
  const node_index c = t.next_sibling(b);
  REQUIRE(t.label(c) == sigma.find("c").value());
  REQUIRE(t.degree(c) == 0);
  REQUIRE(t.next_sibling(c) == nil_node);
  REQUIRE(t.parent(b) == root);

  const std::map<std::uint64_t, std::uint64_t> hist = t.degree_histogram();
  REQUIRE(hist.size() == 2);
  REQUIRE(hist.at(0) == 3);
  REQUIRE(hist.at(2) == 2);
  REQUIRE(t.is_preorder());
}

TEST_CASE("structural equality ignores arena layout") {
  alphabet sigma;
  const tree t1 = build_tree("a(b c(d))", sigma);

  // Same shape, built in a different creation order.
  tree_builder bld;
  const node_index r = bld.add_root(sigma.intern("a"));
  const node_index b = bld.add_child(r, sigma.intern("b"));
  const node_index c = bld.add_child(r, sigma.intern("c"));
  bld.add_child(c, sigma.intern("d"));
  (void)b;
  const tree t2 = bld.take();
  REQUIRE(t1 == t2);

  const tree t3 = build_tree("a(b c(e))", sigma);
  REQUIRE_FALSE(t1 == t3);
  const tree t4 = build_tree("a(c(d) b)", sigma);
  REQUIRE_FALSE(t1 == t4);
}

TEST_CASE("binary tree validation") {
  alphabet sigma;
  REQUIRE_NOTHROW(binary_tree(build_tree("a", sigma)));
  REQUIRE_NOTHROW(binary_tree(build_tree("a(b c)", sigma)));
  REQUIRE_THROWS_AS(binary_tree(build_tree("a(b)", sigma)), std::invalid_argument);
  REQUIRE_THROWS_AS(binary_tree(build_tree("a(b c d)", sigma)), std::invalid_argument);
  REQUIRE_THROWS_AS(binary_tree(tree{}), std::invalid_argument);

  const binary_tree bt(build_tree("a(b c)", sigma));
  REQUIRE(bt.size() == 3);
  REQUIRE_FALSE(bt.is_leaf(bt.root()));
  const node_index l = bt.left(bt.root());
  const node_index r = bt.right(bt.root());
  REQUIRE(bt.label(l) == sigma.find("b").value());
  REQUIRE(bt.label(r) == sigma.find("c").value());
  REQUIRE(bt.is_leaf(l));
  REQUIRE(bt.is_leaf(r));
}

TEST_CASE("comb member shape") {
  alphabet sigma;
  const tree t = comb(3, sigma);
  REQUIRE(t.size() == 7);
  REQUIRE(to_term(t, sigma) == "a(b c b c b c)");
  const auto hist = t.degree_histogram();
  REQUIRE(hist.at(0) == 6);
  REQUIRE(hist.at(6) == 1);
  REQUIRE_FALSE(t.is_binary());
}

TEST_CASE("encoding of a small tree") {
  alphabet sigma;
  const tree t = build_tree("a(b c)", sigma);
  const binary_tree enc = fcns(t, pad_policy::sentinel());
  REQUIRE(enc.size() == 2 * t.size() + 1);
  REQUIRE(to_term(enc.as_tree(), sigma) == "a(b(□ c(□ □)) □)");
  REQUIRE(enc.as_tree().is_preorder());

  const binary_tree enc_a = fcns(t, pad_policy::in_alphabet(sigma.find("a").value()));
  REQUIRE(to_term(enc_a.as_tree(), sigma) == "a(b(a c(a a)) a)");
}

TEST_CASE("encoding keeps original nodes inner") {
  alphabet sigma;
  const tree t = build_tree("f(g(h) i j(k l m))", sigma);
  const binary_tree enc = fcns(t, pad_policy::sentinel());
  REQUIRE(enc.size() == 2 * t.size() + 1);
  std::uint64_t inner = 0, pad_leaves = 0;
  const tree& et = enc.as_tree();
  for (node_index v = 0; v < et.size(); ++v) {
    if (et.first_child(v) != nil_node) {
      ++inner;
      REQUIRE(et.label(v) != sentinel_label);
    } else {
      ++pad_leaves;
      REQUIRE(et.label(v) == sentinel_label);
    }
  }
  REQUIRE(inner == t.size());
  REQUIRE(pad_leaves == t.size() + 1);
}

TEST_CASE("encoding of the empty tree is a single pad leaf") {
  const tree t;
  REQUIRE(t.empty());
  const binary_tree enc = fcns(t, pad_policy::sentinel());
  REQUIRE(enc.size() == 1);
  REQUIRE(enc.is_leaf(enc.root()));
}

TEST_CASE("decoding inverts the encoding") {
  alphabet sigma;
  for (const char* term :
       {"a", "a(b)", "a(b c)", "a(b(d d) c(d(e) d(e)))", "x(y(z(w)))", "a(b c d e f)"}) {
    const tree t = build_tree(term, sigma);
    REQUIRE(fcns_decode(fcns(t, pad_policy::sentinel())) == t);
    REQUIRE(fcns_decode(fcns(t, pad_policy::in_alphabet(sigma.intern("a")))) == t);
  }
}

TEST_CASE("decoding random encodings") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    alphabet sigma;
    random_tree_params p;
    p.seed = seed;
    p.max_size = 120;
    const tree t = random_tree(p, sigma);
    const binary_tree enc = fcns(t, pad_policy::sentinel());
    REQUIRE(enc.size() == 2 * t.size() + 1);
    REQUIRE(fcns_decode(enc) == t);
  }
}

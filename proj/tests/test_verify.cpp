#include <catch2/catch_amalgamated.hpp>

#include "treent/verify.hpp"

using namespace treent;

TEST_CASE("tolerance scales with magnitude") {
  REQUIRE(check_tolerance(0.0, 0.0) == Catch::Approx(1e-6 + 1e-9));
  REQUIRE(check_tolerance(1e6, 1e6) == Catch::Approx(1e-6 + 1e-3));
  REQUIRE(check_tolerance(-1e6, 0.0) == Catch::Approx(1e-6 + 1e-3));
}

TEST_CASE("inequality suites hold on random trees") {
  verify_params p;
  p.trials = 40;
  p.k_max = 3;
  p.seed = 7;
  const verify_summary s = run_inequality_suites(p);

  REQUIRE(s.suites.size() == 14);
  for (const auto& suite : s.suites) {
    INFO(suite.name << ": " << suite.first_counterexample);
    CHECK(suite.failures == 0);
    CHECK(suite.checks > 0);
  }
  REQUIRE(s.ok());
  REQUIRE(s.total_failures() == 0);
  REQUIRE(s.total_checks() > 1000);
}

TEST_CASE("inequality suites can be restricted by tree kind") {
  verify_params p;
  p.trials = 10;
  p.general = true;
  p.unlabeled = false;
  p.binary = false;
  const verify_summary s = run_inequality_suites(p);
  REQUIRE(s.ok());
  // The binary-only suites still appear but run no checks.
  for (const auto& suite : s.suites)
    if (suite.name.rfind("binary", 0) == 0) CHECK(suite.checks == 0);
}

TEST_CASE("inequality suites are deterministic") {
  verify_params p;
  p.trials = 15;
  p.seed = 99;
  const verify_summary a = run_inequality_suites(p);
  const verify_summary b = run_inequality_suites(p);
  REQUIRE(a.suites.size() == b.suites.size());
  for (std::size_t i = 0; i < a.suites.size(); ++i) {
    REQUIRE(a.suites[i].checks == b.suites[i].checks);
    REQUIRE(a.suites[i].failures == b.suites[i].failures);
  }
}

TEST_CASE("family predictions hold at reduced sizes") {
  family_check_params p;
  p.comb_max_n = 10;
  p.two_branch_max_n = 10;
  p.left_chain_max_n = 20;
  p.permutation_max_n = 5;
  p.permutation_max_k = 3;
  const verify_summary s = run_family_checks(p);

  REQUIRE(s.suites.size() == 5);
  for (const auto& suite : s.suites) {
    INFO(suite.name << ": " << suite.first_counterexample);
    CHECK(suite.failures == 0);
    CHECK(suite.checks > 0);
  }
  REQUIRE(s.ok());
}

TEST_CASE("counterexamples are reported") {
  // A deliberately broken summary: one failing suite flips the verdict.
  verify_summary s;
  s.suites.push_back({"good", 10, 0, ""});
  REQUIRE(s.ok());
  s.suites.push_back({"bad", 10, 2, "n=3 k=1: lhs 1 < rhs 2"});
  REQUIRE_FALSE(s.ok());
  REQUIRE(s.total_checks() == 20);
  REQUIRE(s.total_failures() == 2);
  REQUIRE_FALSE(s.suites[1].ok());
}

#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

TEST_CASE("finite satisfiability matches bounded brute force") {
  std::mt19937_64 rng(202);
  int yes = 0, no = 0;
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, 8)(rng);
    ConstraintSet cs = test::random_system(rng, n, n + 1, 3);
    bool brute = test::nat_brute_force(cs, 6);
    FinsatVerdict v = decide_finsat(cs);
    CAPTURE(dump_constraints(cs));
    REQUIRE(v.verdict != Verdict::ResourceExceeded);
    if (brute) CHECK(v.verdict == Verdict::Yes);
    if (v.verdict == Verdict::Yes) {
      REQUIRE(v.witness);
      CHECK(first_violation_nat(cs, v.witness->value) == -1);
      if (!brute) {
        // Only a witness beyond the brute-force range may disagree.
        mpz_class mx = 0;
        for (const auto& x : v.witness->value) mx = std::max(mx, x);
        CHECK(mx > 6);
      }
      ++yes;
    } else {
      ++no;
    }
  }
  CHECK(yes > 20);
  CHECK(no > 20);
}

TEST_CASE("finite implies general on random systems") {
  std::mt19937_64 rng(203);
  for (int i = 0; i < 200; ++i) {
    ConstraintSet cs = test::random_system(rng, 7, 8, 4);
    FinsatVerdict v = decide_finsat(cs);
    if (v.verdict == Verdict::Yes) CHECK(decide_sat(cs).yes);
  }
}

TEST_CASE("a threshold forces a large sum") {
  // x > 0 ⇒ a + b ≥ 5, x = a + b, x ≥ 1: smallest witness has x = 5.
  ConstraintSet cs(3);
  std::vector<VarIndex> ab{1, 2}, x{0};
  cs.add_sum_eq(0, ab);
  cs.add_cond(0, ab, 5);
  cs.add_ge1(x);
  FinsatVerdict v = decide_finsat(cs);
  REQUIRE(v.verdict == Verdict::Yes);
  CHECK(v.witness->value[0] >= 5);
  CHECK(first_violation_nat(cs, v.witness->value) == -1);
}

TEST_CASE("a zero blocks the only support") {
  ConstraintSet cs(2);
  std::vector<VarIndex> t{1}, x{0};
  cs.add_cond(0, t, 1);
  cs.add_zero(1);
  cs.add_ge1(x);
  CHECK(decide_finsat(cs).verdict == Verdict::No);
}

TEST_CASE("scale_to_nat clears denominators") {
  std::vector<mpq_class> pt{mpq_class(1, 2), mpq_class(2, 3), 0};
  auto z = scale_to_nat(pt);
  CHECK(z == std::vector<mpz_class>{3, 4, 0});
}

TEST_CASE("small-solution bound grows with the system") {
  CHECK(papadimitriou_bound(2, 3, 1) < papadimitriou_bound(3, 3, 1));
  CHECK(papadimitriou_bound(2, 3, 1) < papadimitriou_bound(2, 3, 2));
}

TEST_CASE("P0 and P1 witnesses are small") {
  for (const char* text : {test::kP0, test::kP1}) {
    TypeSpace ts(test::padded(text));
    ConstraintSet cs = generate_E(ts);
    FinsatVerdict v = decide_finsat(cs);
    REQUIRE(v.verdict == Verdict::Yes);
    CHECK_FALSE(v.witness_too_large);
    CHECK(witness_domain_size(cs, v.witness->value) <= 100);
  }
}

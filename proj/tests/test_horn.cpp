#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

TEST_CASE("unit propagation reaches the least model") {
  HornProgram hp(4);
  std::vector<VarIndex> none, b0{0}, b01{0, 1};
  hp.add(none, 0);
  hp.add(b0, 1);
  hp.add(b01, 2);
  HornResult r = horn_sat(hp);
  CHECK(r.satisfiable);
  CHECK(r.zero == std::vector<bool>{true, true, true, false});
  hp.add(std::vector<VarIndex>{2}, HornProgram::kFalse);
  r = horn_sat(hp);
  CHECK_FALSE(r.satisfiable);
  CHECK(r.refuted_by == 3);
}

TEST_CASE("general satisfiability matches {0, aleph0} brute force") {
  std::mt19937_64 rng(101);
  int yes = 0, no = 0;
  for (int i = 0; i < 400; ++i) {
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, 12)(rng);
    ConstraintSet cs = test::random_system(rng, n, n + 2, 3);
    SatVerdict v = decide_sat(cs);
    CHECK(v.yes == test::star_brute_force(cs));
    (v.yes ? yes : no)++;
  }
  CHECK(yes > 20);
  CHECK(no > 20);
}

TEST_CASE("witness is aleph0 off the least model") {
  TypeSpace ts(test::padded(test::kP0));
  ConstraintSet cs = generate_E(ts);
  SatVerdict v = decide_sat(cs);
  REQUIRE(v.yes);
  REQUIRE(v.witness);
  std::vector<Star> th(cs.num_vars());
  for (std::size_t i = 0; i < th.size(); ++i) th[i] = v.witness->aleph[i] ? Star::inf() : Star{};
  CHECK(first_violation_star(cs, th) == -1);
}

TEST_CASE("aleph0 arithmetic") {
  ConstraintSet cs(3);
  std::vector<VarIndex> t{1, 2};
  cs.add_sum_eq(0, t);
  cs.add_cond(0, t, 5);
  std::vector<Star> th{Star::inf(), Star::inf(), Star{}};
  CHECK(first_violation_star(cs, th) == -1);
  th[0] = Star{false, 1};
  CHECK(first_violation_star(cs, th) == 0);
}

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

TEST_CASE("P0 block sizes") {
  TypeSpace ts(test::padded(test::kP0));
  auto vs = build_variable_space(ts);
  CHECK(vs->family_size(Family::X) == 16);
  CHECK(vs->family_size(Family::Y) == 56);
  CHECK(vs->family_size(Family::Z) == 120);
  CHECK(vs->family_size(Family::YH) == 48);
  CHECK(vs->family_size(Family::ZH) == 112);
  CHECK(vs->size() == 352);
}

TEST_CASE("variable count matches the block formula") {
  for (const auto& p : test::corpus(21, 40, 100'000)) {
    TypeSpace ts(p);
    auto vs = build_variable_space(ts);
    CHECK(vs->size() == test::expected_vars(ts.P(), ts.p(), ts.q(), ts.range().size(), ts.invertible_patterns().size()));
  }
}

TEST_CASE("variable cap") {
  TypeSpace ts(test::padded(test::kP0));
  Caps caps;
  caps.max_vars = 351;
  CHECK_THROWS_AS(build_variable_space(ts, caps), CapExceeded);
}

TEST_CASE("indices decode to their ids and names parse back") {
  for (const auto& p : test::corpus(23, 8, 30'000)) {
    TypeSpace ts(p);
    auto vs = build_variable_space(ts);
    for (VarIndex v = 0; v < vs->size(); ++v) {
      VarId id = vs->decode(v);
      CHECK(vs->index(id) == v);
      CHECK(vs->parse_name(vs->name(v)) == v);
    }
  }
}

TEST_CASE("E mentions every variable except out-of-range pairs") {
  TypeSpace ts(test::padded(test::kP1));
  ConstraintSet cs = generate_E(ts);
  std::vector<bool> seen(cs.num_vars(), false);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    if (c.kind != Kind::SumGe1) seen[c.target] = true;
    for (VarIndex t : c.terms) seen[t] = true;
  }
  const VarSpace& vs = *cs.space();
  for (VarIndex v = 0; v < cs.num_vars(); ++v) {
    if (seen[v]) continue;
    VarId id = vs.decode(v);
    CAPTURE(vs.name(v));
    REQUIRE((id.family == Family::YH || id.family == Family::ZH));
    CountVector a = vs.range().decode(id.v), b = vs.range().decode(id.w);
    bool over = false;
    for (std::size_t i = 0; i < a.size(); ++i) over = over || a[i] + b[i] > vs.range().bounds()[i];
    CHECK(over);
  }
  CHECK(cs.count(Kind::SumGe1) == 1);
  CHECK(cs.count(Kind::Cond) > 0);
}

TEST_CASE("dump and load round-trip") {
  for (const auto& p : test::corpus(25, 6, 30'000)) {
    TypeSpace ts(p);
    ConstraintSet cs = generate_E(ts);
    ConstraintSet back = load_constraints(dump_constraints(cs));
    CHECK(back == cs);
    CHECK(dump_constraints(back) == dump_constraints(cs));
  }
  std::mt19937_64 rng(4);
  ConstraintSet anon = test::random_system(rng, 9, 12, 3);
  CHECK(load_constraints(dump_constraints(anon)) == anon);
}

TEST_CASE("malformed constraint files are rejected") {
  CHECK_THROWS(load_constraints("gc2-constraints\nnonsense\n"));
}

TEST_CASE("E is deterministic") {
  TypeSpace ts(test::padded(test::kP1));
  CHECK(dump_constraints(generate_E(ts)) == dump_constraints(generate_E(ts)));
}

#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

namespace {

// Spectrum and tally laws at every node: children add up to the parent, the root
// tallies to C and the sum of spectrum and tally at the root is C.
void check_spectra_laws(const TypeSpace& ts, const Structure& st) {
  const CountVector C = ts.range().decode(ts.range().top());
  for (Element a = 0; a < st.size(); ++a) {
    CountVector sp = spectrum(ts, st, a, BitString{});
    CountVector tl = tally(ts, st, a, BitString{});
    for (std::size_t i = 0; i < C.size(); ++i) CHECK(sp[i] + tl[i] == C[i]);
    for (std::uint64_t node = 0; node + 1 < (std::uint64_t{1} << ts.p()); ++node) {
      BitString s = BitString::from_node(node);
      CountVector par = spectrum(ts, st, a, s), l = spectrum(ts, st, a, s.child(0)), r = spectrum(ts, st, a, s.child(1));
      for (std::size_t i = 0; i < C.size(); ++i) CHECK(par[i] == l[i] + r[i]);
    }
    for (std::uint64_t node = 0; node + 1 < (std::uint64_t{1} << ts.q()); ++node) {
      BitString t = BitString::from_node(node);
      CountVector par = tally(ts, st, a, t), l = tally(ts, st, a, t.child(0)), r = tally(ts, st, a, t.child(1));
      for (std::size_t i = 0; i < C.size(); ++i) CHECK(par[i] == l[i] + r[i]);
    }
  }
}

}  // namespace

TEST_CASE("structure files round-trip") {
  Structure st = parse_structure("domain 3\nnullary z: true\nunary p: 0 2\nbinary r: (0,1) (2,2)\n");
  CHECK(st.size() == 3);
  CHECK(st.nullary(0));
  CHECK(st.unary(0, 2));
  CHECK(st.edge(0, 0, 1));
  CHECK_FALSE(st.edge(0, 1, 0));
  CHECK(parse_structure(dump_structure(st)) == st);
  CHECK_THROWS(parse_structure("domain 2\nbinary r: (0,5)\n"));
}

TEST_CASE("evaluation of counting quantifiers") {
  Structure st = parse_structure("domain 3\nbinary r: (0,1) (0,2) (1,2)\n");
  Signature sig = st.sig();
  CHECK(evaluate(*parse_sexpr("(exists x (atleast 2 y (r x y)))", sig), st));
  CHECK_FALSE(evaluate(*parse_sexpr("(forall x (atleast 1 y (r x y)))", sig), st));
  CHECK(evaluate(*parse_sexpr("(forall x (atmost 2 y (r y x)))", sig), st));
  CHECK(evaluate(*parse_sexpr("(exists x (exactly 2 y (r y x)))", sig), st));
}

TEST_CASE("P0 2-cycle: spectrum and tally at the root") {
  TypeSpace ts(test::padded(test::kP0));
  Structure st = make_chromatic(ts, parse_structure(test::kP0Cycle));
  REQUIRE(check_normal_form(ts, st).ok());
  CHECK(spectrum(ts, st, 0, BitString{}) == CountVector{1});
  CHECK(tally(ts, st, 0, BitString{}) == CountVector{0});
  check_spectra_laws(ts, st);
}

TEST_CASE("P1 3-cycle: messages only") {
  TypeSpace ts(test::padded(test::kP1));
  Structure st = make_chromatic(ts, parse_structure(test::kP1Cycle));
  REQUIRE(check_normal_form(ts, st).ok());
  CHECK(spectrum(ts, st, 0, BitString{}) == CountVector{0});
  CHECK(tally(ts, st, 0, BitString{}) == CountVector{1});
  check_spectra_laws(ts, st);
}

TEST_CASE("normal form check reports the failure") {
  TypeSpace ts(test::padded(test::kP1));
  Structure two = parse_structure(test::kP0Cycle);
  CHECK(check_normal_form(ts, two).forbidden_pair.has_value());
  Structure none = parse_structure("domain 2\nbinary f:\n");
  CHECK(check_normal_form(ts, none).count_wrong.has_value());
}

TEST_CASE("duplication preserves sentences") {
  const char* formulas[] = {
      "(forall x (exactly 1 y (and (f x y) (not (= x y)))))",
      "(forall x (forall y (imp (f x y) (not (f y x)))))",
      "(exists x (atleast 1 y (f y x)))",
  };
  for (const char* text : {test::kP0Cycle, test::kP1Cycle}) {
    Structure st = parse_structure(text);
    Signature sig = st.sig();
    for (const char* ft : formulas) {
      FormulaPtr f = parse_sexpr(ft, sig);
      bool base = evaluate(*f, st);
      for (Element n : {2u, 3u}) CHECK(evaluate(*f, duplicate(st, n)) == base);
    }
  }
}

TEST_CASE("chromatic coloring and duplication keep normal-form models") {
  TypeSpace ts(test::padded(test::kP0));
  Structure st = parse_structure("domain 4\nbinary f: (0,1) (1,0) (2,3) (3,2)\n");
  Structure ch = make_chromatic(ts, st);
  CHECK(is_chromatic(ts, ch));
  CHECK(check_normal_form(ts, ch).ok());
  Structure d = duplicate(ch, 3);
  CHECK(d.size() == 12);
  CHECK(is_chromatic(ts, d));
  check_spectra_laws(ts, d);
}

TEST_CASE("solutions read off models satisfy E") {
  for (const auto& [nf, model] : {std::pair{test::kP0, test::kP0Cycle}, std::pair{test::kP1, test::kP1Cycle}}) {
    TypeSpace ts(test::padded(nf));
    ConstraintSet cs = generate_E(ts);
    auto theta = solution_from_model(ts, *cs.space(), parse_structure(model));
    CHECK(first_violation_nat(cs, theta) == -1);
  }
}

TEST_CASE("oracle finds the smallest models") {
  TypeSpace p0(test::padded(test::kP0));
  auto m0 = oracle_finsat(p0, 4);
  REQUIRE(m0);
  CHECK(m0->size() == 2);
  TypeSpace p1(test::padded(test::kP1));
  auto m1 = oracle_finsat(p1, 4);
  REQUIRE(m1);
  CHECK(m1->size() == 3);
  CHECK_FALSE(oracle_finsat(p1, 2));
}

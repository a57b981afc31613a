#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

namespace {

FormulaPtr parse_with(const char* text, Signature& sig) { return parse_sexpr_infer(text, sig); }

}  // namespace

TEST_CASE("parse infers arities from first use") {
  ParsedFormula pf = parse_formula("(forall x (imp (p x) (exists y (r x y))))");
  CHECK(pf.sig.unary == std::vector<std::string>{"p"});
  CHECK(pf.sig.binary == std::vector<std::string>{"r"});
  CHECK(pf.formula->op == Op::Forall);
}

TEST_CASE("headers fix the signature") {
  ParsedFormula pf = parse_formula("nullary z\nunary p\nbinary r\n(and (z) (forall x (p x)))");
  CHECK(pf.sig.nullary.size() == 1);
  CHECK(pf.sig.unary.size() == 1);
  CHECK(pf.sig.binary.size() == 1);
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parse_formula("(forall x (p x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("unary p\n(forall x (p x y))"), ParseError);
  try {
    parse_formula("binary r\n(forall x (r x))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("render and parse round-trip") {
  std::mt19937_64 rng(7);
  Signature sig;
  sig.unary = {"p", "q"};
  sig.binary = {"r", "s"};
  std::vector<FormulaPtr> atoms = {make_atom("p", {Var::x}), make_atom("q", {Var::y}),
                                   make_atom("r", {Var::x, Var::y}), make_atom("s", {Var::y, Var::x}),
                                   make_eq(Var::x, Var::y)};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr body = test::random_qf(rng, atoms, 3);
    FormulaPtr f = make_quant(Op::Forall, Var::x,
                              make_counting(Op::AtLeast, 2, Var::y, make_atom("r", {Var::x, Var::y}), body));
    FormulaPtr back = parse_sexpr(render(f), sig);
    CHECK(equal(f, back));
  }
}

TEST_CASE("swap_vars is an involution") {
  std::mt19937_64 rng(11);
  std::vector<FormulaPtr> atoms = {make_atom("p", {Var::x}), make_atom("r", {Var::x, Var::y}),
                                   make_atom("r", {Var::y, Var::x}), make_eq(Var::x, Var::y)};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = test::random_qf(rng, atoms, 3);
    CHECK(equal(swap_vars(swap_vars(f)), f));
  }
}

TEST_CASE("free variables") {
  Signature sig;
  CHECK(free_vars(*parse_with("(r x y)", sig)) == 3);
  CHECK(free_vars(*parse_with("(exists y (r x y))", sig)) == 1);
  CHECK(free_vars(*parse_with("(forall x (exists y (r x y)))", sig)) == 0);
}

TEST_CASE("simplify folds constants") {
  Signature sig;
  CHECK(simplify(parse_with("(and true (or false (p x)))", sig))->op == Op::Atom);
  CHECK(simplify(parse_with("(imp false (p x))", sig))->op == Op::True);
  CHECK(simplify(parse_with("(not (and (p x) false))", sig))->op == Op::True);
}

TEST_CASE("guarded fragment check") {
  Signature sig;
  sig.unary = {"p"};
  sig.binary = {"r"};
  CHECK_NOTHROW(validate_gc2(parse_sexpr("(forall x (exists y (and (r x y) (p y))))", sig), sig));
  CHECK_NOTHROW(validate_gc2(parse_sexpr("(forall x (atleast 3 y (and (r y x) (p y))))", sig), sig));
  // Three variables are not part of the logic.
  CHECK_THROWS(parse_sexpr("(forall z (p z))", sig));
}

TEST_CASE("signature rejects duplicates") {
  Signature sig;
  sig.unary = {"p"};
  sig.binary = {"p"};
  CHECK_THROWS_AS(sig.check(), InvalidInput);
}

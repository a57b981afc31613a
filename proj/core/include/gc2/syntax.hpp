#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

namespace gc2 {

enum class Var : std::uint8_t { x = 0, y = 1 };

inline Var other(Var v) { return v == Var::x ? Var::y : Var::x; }
inline const char* var_name(Var v) { return v == Var::x ? "x" : "y"; }

// Bit 0 stands for x, bit 1 for y.
using VarMask = std::uint8_t;
inline VarMask mask_of(Var v) { return v == Var::x ? 1 : 2; }

struct CountingPredicate {
  std::string pred;
  mpz_class bound;
};

struct Signature {
  std::vector<std::string> nullary;
  std::vector<std::string> unary;
  std::vector<std::string> binary;
  std::vector<CountingPredicate> counting;

  // -1 when the name is not declared.
  int arity(std::string_view name) const;
  int unary_index(std::string_view name) const;
  int binary_index(std::string_view name) const;
  std::size_t size() const { return unary.size() + binary.size(); }
  bool has(std::string_view name) const { return arity(name) >= 0; }

  // Throws InvalidInput on duplicate names or bad counting entries.
  void check() const;
};

enum class Op : std::uint8_t {
  True, False, Atom, Eq, Not, And, Or, Imp, Iff,
  Forall, Exists, AtLeast, AtMost, Exactly
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::True;
  std::string pred;              // Atom
  std::vector<Var> args;         // Atom; Eq has exactly two
  std::vector<FormulaPtr> kids;  // connectives; quantifier body is kids[0]
  Var var = Var::x;              // quantifiers
  mpz_class bound;               // counting quantifiers
  FormulaPtr guard;              // counting quantifiers

  bool is_counting() const {
    return op == Op::AtLeast || op == Op::AtMost || op == Op::Exactly;
  }
  bool is_quantifier() const {
    return op == Op::Forall || op == Op::Exists || is_counting();
  }
  const FormulaPtr& body() const { return kids[0]; }
};

// Constructors. The Boolean ones fold true/false but keep structure otherwise.
FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_bool(bool b);
FormulaPtr make_atom(std::string pred, std::vector<Var> args);
FormulaPtr make_eq(Var a, Var b);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(std::vector<FormulaPtr> kids);
FormulaPtr make_or(std::vector<FormulaPtr> kids);
FormulaPtr make_imp(FormulaPtr a, FormulaPtr b);
FormulaPtr make_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr make_quant(Op op, Var v, FormulaPtr body);
FormulaPtr make_counting(Op op, mpz_class bound, Var v, FormulaPtr guard, FormulaPtr body);

// Raw constructors without folding, used by the parser so render/parse roundtrips.
FormulaPtr raw_node(Op op, std::vector<FormulaPtr> kids);

bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

VarMask free_vars(const Formula& f);
bool has_quantifier(const Formula& f);
bool has_equality(const Formula& f);

// Rename x to y and y to x everywhere, bound occurrences included.
FormulaPtr swap_vars(const FormulaPtr& f);
// Replace free occurrences of `from` by `to`, renaming bound variables to avoid capture.
FormulaPtr substitute(const FormulaPtr& f, Var from, Var to);
// Guard and remainder of a ∀/∃ body: (imp g φ), (and g φ ...), a bare atom under ∃
// (remainder true) or a negated atom under ∀ (remainder false). Null guard otherwise.
struct GuardedBody {
  FormulaPtr guard;
  FormulaPtr rest;
};
GuardedBody split_guarded(const Formula& q);

// Constant folding of true/false through connectives.
FormulaPtr simplify(const FormulaPtr& f);

struct ParsedFormula {
  Signature sig;
  FormulaPtr formula;
};

// Formula file: optional `nullary`/`unary`/`binary` header lines, then one s-expression.
// Without headers, arities are inferred from first use.
ParsedFormula parse_formula(std::string_view text);

// Parses an s-expression against a fixed signature. `offset_line` shifts reported lines.
FormulaPtr parse_sexpr(std::string_view text, const Signature& sig, std::size_t offset_line = 0);
// Same, but undeclared predicates are added to `sig` with the arity of their first use.
FormulaPtr parse_sexpr_infer(std::string_view text, Signature& sig, std::size_t offset_line = 0);

std::string render(const Formula& f);
inline std::string render(const FormulaPtr& f) { return render(*f); }
std::string render_signature(const Signature& sig);

struct Validated {
  FormulaPtr formula;
  std::unordered_map<const Formula*, VarMask> free;
};

// Throws GuardViolation naming the offending subformula.
Validated validate_gc2(const FormulaPtr& f, const Signature& sig);

bool is_guard_atom(const Formula& f, const Signature& sig);

// Node count plus the bit length of every counting bound.
mpz_class formula_size(const Formula& f);

}  // namespace gc2

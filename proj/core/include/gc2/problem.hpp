#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gc2/error.hpp"
#include "gc2/syntax.hpp"

namespace gc2 {

// ∀x∀y(e(x,y) → β ∨ x≈y)
struct GuardPair {
  std::string pred;
  FormulaPtr beta;
};

// ∀x α ∧ ⋀_h guard pair ∧ ⋀_i ∀x∃=C_i y(f_i(x,y) ∧ x≉y).
// Counting pairs live in sig.counting; the last `padding` unary predicates are padding.
struct NormalFormProblem {
  Signature sig;
  FormulaPtr alpha;
  std::vector<GuardPair> guards;
  std::size_t padding = 0;

  std::size_t m() const { return sig.counting.size(); }
  // Scalar C = max_i C_i.
  mpz_class max_bound() const;
  // Throws InvalidInput when a normal-form invariant fails.
  void check() const;
};

// ⌈log₂((mC)²+1)⌉
std::size_t padding_count(std::size_t m, const mpz_class& c);

// Appends fresh padding predicates. Throws CapExceeded when |Σ| would exceed the cap.
NormalFormProblem pad_signature(NormalFormProblem p, const Caps& caps = {});

// Makes l ≥ 1 and m ≥ 1: a vacuous guard pair on the first binary predicate, a fresh
// counting predicate with bound 1 when there is none.
void complete_guards_and_counts(NormalFormProblem& p);

// Direct normal-form file: optional `unary`/`binary` headers, `alpha`, `guard`, `count`, `end`.
// Returned unpadded.
NormalFormProblem parse_normal_form(std::string_view text);
// Inverse of parse_normal_form; padding predicates are omitted.
std::string render_normal_form(const NormalFormProblem& p);

// Stable 64-bit FNV-1a hash of the rendered problem and its padding.
std::uint64_t problem_hash(const NormalFormProblem& p);

// The problem as one GC2 sentence over its signature.
FormulaPtr problem_formula(const NormalFormProblem& p);

// Fresh name `stem<k>` for the least k not yet used in sig.
std::string fresh_name(const Signature& sig, const std::string& stem);

}  // namespace gc2

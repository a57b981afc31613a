#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gc2/error.hpp"
#include "gc2/problem.hpp"
#include "gc2/syntax.hpp"

namespace gc2 {

// One truth assignment to the nullary predicates and to the closed quantified
// subformulas that are not top-level conjuncts.
struct NullaryBranch {
  std::vector<std::pair<std::string, bool>> assignment;  // original nullary predicates only
  Signature sig;                                        // no nullary predicates
  FormulaPtr formula;                                   // conjunction of closed conjuncts
};

// The input is (finitely) satisfiable iff some branch is. Branches whose formula
// folds to false are kept. Throws CapExceeded past caps.max_nullary case-split atoms.
std::vector<NullaryBranch> eliminate_nullary(const FormulaPtr& f, const Signature& sig, const Caps& caps = {});

// Unpadded normal form, l ≥ 1 and m ≥ 1. The sentence must have no nullary predicates
// and closed quantified subformulas only as top-level conjuncts, possibly negated
// (the shape eliminate_nullary produces); otherwise throws InvalidInput.
NormalFormProblem scott_normalize(const FormulaPtr& f, const Signature& sig);

struct NormalizedBranch {
  std::vector<std::pair<std::string, bool>> assignment;
  NormalFormProblem problem;  // padded
  bool trivially_false = false;  // α folded to false
};

// Validation, nullary elimination, normalization and padding.
std::vector<NormalizedBranch> normalize(const FormulaPtr& f, const Signature& sig, const Caps& caps = {});

}  // namespace gc2

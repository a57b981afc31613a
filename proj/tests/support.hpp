#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gc2/constraints.hpp"
#include "gc2/horn.hpp"
#include "gc2/normalizer.hpp"
#include "gc2/problem.hpp"
#include "gc2/solver_nat.hpp"
#include "gc2/structure.hpp"
#include "gc2/typespace.hpp"

namespace gc2::test {

inline NormalFormProblem padded(const std::string& text) { return pad_signature(parse_normal_form(text)); }

inline const char* kP0 = "binary f\nalpha true\nguard f true\ncount f 1\nend\n";
inline const char* kP1 = "binary f\nalpha true\nguard f (not (f y x))\ncount f 1\nend\n";
inline const char* kPsiInf =
    "binary f g\n"
    "(and (forall x (exactly 2 y (and (f x y) (not (= x y)))))\n"
    "     (forall x (exactly 1 y (and (g x y) (not (= x y)))))\n"
    "     (forall x (forall y (imp (f x y) (or (g y x) (= x y))))))\n";

inline const char* kP0Cycle = "domain 2\nbinary f: (0,1) (1,0)\n";
inline const char* kP1Cycle = "domain 3\nbinary f: (0,1) (1,2) (2,0)\n";

// |V| from the block sizes alone, independent of the layout code.
inline std::uint64_t expected_vars(std::uint64_t P, unsigned p, unsigned q, std::uint64_t U, std::uint64_t ninv) {
  std::uint64_t y = (std::uint64_t{2} << p) - 1, z = (std::uint64_t{2} << q) - 1;
  return P * P * ninv + P * y * U + P * z * U + P * ((y - 1) / 2) * U * U + P * ((z - 1) / 2) * U * U;
}

// Random quantifier-free formula over the given atoms.
inline FormulaPtr random_qf(std::mt19937_64& rng, const std::vector<FormulaPtr>& atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  int k = pick(rng);
  if (k <= 1 || atoms.empty()) {
    if (atoms.empty()) return make_true();
    FormulaPtr a = atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)];
    return k == 0 ? a : make_not(a);
  }
  FormulaPtr l = random_qf(rng, atoms, depth - 1), r = random_qf(rng, atoms, depth - 1);
  if (k == 2) return make_and({l, r});
  if (k == 3) return make_or({l, r});
  return make_imp(l, r);
}

// Normal-form problems with ≤ 2 unary, ≤ 2 binary predicates, one counting conjunct with
// C ≤ 2, and at most max_vars constraint variables.
inline std::vector<NormalFormProblem> corpus(std::uint64_t seed, std::size_t count, std::uint64_t max_vars) {
  std::mt19937_64 rng(seed);
  std::vector<NormalFormProblem> out;
  while (out.size() < count) {
    NormalFormProblem p;
    unsigned nu = std::uniform_int_distribution<unsigned>(0, 2)(rng);
    unsigned nb = std::uniform_int_distribution<unsigned>(1, 2)(rng);
    for (unsigned i = 0; i < nu; ++i) p.sig.unary.push_back("u" + std::to_string(i));
    for (unsigned i = 0; i < nb; ++i) p.sig.binary.push_back("r" + std::to_string(i));
    unsigned c = std::uniform_int_distribution<unsigned>(1, 2)(rng);
    p.sig.counting.push_back({p.sig.binary[0], c});
    std::vector<FormulaPtr> ax, axy;
    for (const auto& u : p.sig.unary) {
      ax.push_back(make_atom(u, {Var::x}));
      axy.push_back(make_atom(u, {Var::x}));
      axy.push_back(make_atom(u, {Var::y}));
    }
    for (const auto& b : p.sig.binary) {
      ax.push_back(make_atom(b, {Var::x, Var::x}));
      axy.push_back(make_atom(b, {Var::x, Var::y}));
      axy.push_back(make_atom(b, {Var::y, Var::x}));
    }
    p.alpha = std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? make_true() : random_qf(rng, ax, 2);
    unsigned ng = std::uniform_int_distribution<unsigned>(1, 2)(rng);
    for (unsigned g = 0; g < ng; ++g) {
      std::string e = p.sig.binary[std::uniform_int_distribution<unsigned>(0, nb - 1)(rng)];
      p.guards.push_back({e, random_qf(rng, axy, 2)});
    }
    NormalFormProblem q = pad_signature(p);
    TypeSpace ts(q);
    Caps caps;
    caps.max_vars = max_vars;
    try {
      build_variable_space(ts, caps);
    } catch (const CapExceeded&) {
      continue;
    }
    out.push_back(std::move(q));
  }
  return out;
}

// All assignments over {0, ℵ₀}: does any satisfy the system?
inline bool star_brute_force(const ConstraintSet& cs) {
  const std::uint64_t n = cs.num_vars();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Star> th(n);
    for (std::uint64_t v = 0; v < n; ++v) th[v] = (mask >> v) & 1u ? Star::inf() : Star{};
    if (first_violation_star(cs, th) < 0) return true;
  }
  return false;
}

// Direct ℕ evaluation of every constraint.
inline bool holds_nat(const ConstraintSet& cs, const std::vector<std::uint64_t>& th) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    std::uint64_t s = 0;
    for (VarIndex t : c.terms) s += th[t];
    switch (c.kind) {
      case Kind::SumEq:
        if (th[c.target] != s) return false;
        break;
      case Kind::SumGe1:
        if (s < 1) return false;
        break;
      case Kind::Zero:
        if (th[c.target] != 0) return false;
        break;
      case Kind::Cond:
        if (th[c.target] > 0 && s < c.threshold) return false;
        break;
    }
  }
  return true;
}

// All assignments with values ≤ bound.
inline bool nat_brute_force(const ConstraintSet& cs, std::uint64_t bound) {
  const std::uint64_t n = cs.num_vars();
  std::vector<std::uint64_t> th(n, 0);
  while (true) {
    if (holds_nat(cs, th)) return true;
    std::uint64_t i = 0;
    while (i < n && th[i] == bound) th[i++] = 0;
    if (i == n) return false;
    ++th[i];
  }
}

// Random system over anonymous variables.
inline ConstraintSet random_system(std::mt19937_64& rng, std::uint64_t nvars, std::size_t rows, std::uint64_t max_th) {
  ConstraintSet cs(nvars);
  std::uniform_int_distribution<VarIndex> var(0, static_cast<VarIndex>(nvars - 1));
  auto terms = [&](std::size_t lo, std::size_t hi) {
    std::vector<VarIndex> t;
    std::size_t k = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    for (std::size_t i = 0; i < k; ++i) t.push_back(var(rng));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  };
  cs.add_ge1(terms(1, 3));
  for (std::size_t r = 0; r < rows; ++r) {
    int k = std::uniform_int_distribution<int>(0, 9)(rng);
    VarIndex v = var(rng);
    if (k <= 4) {
      auto t = terms(0, 3);
      t.erase(std::remove(t.begin(), t.end(), v), t.end());
      cs.add_sum_eq(v, t);
    } else if (k <= 5) {
      cs.add_zero(v);
    } else if (k <= 6) {
      cs.add_ge1(terms(1, 3));
    } else {
      cs.add_cond(v, terms(1, 3), std::uniform_int_distribution<std::uint64_t>(1, max_th)(rng));
    }
  }
  return cs;
}

}  // namespace gc2::test

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gc2/constraints.hpp"
#include "gc2/lp.hpp"

namespace gc2 {

// Small-solution bound after slack conversion: H = n'·(m'·a)^{2m'+1}, following
// Papadimitriou's bound on vertices of {Ax = b, x ≥ 0}.
mpz_class papadimitriou_bound(std::uint64_t rows, std::uint64_t cols, const mpz_class& a);
// The bound for E_H: rows, columns and coefficient size of the gated system.
mpz_class papadimitriou_bound(const ConstraintSet& cs);

// E_H: Cond(x, terms, D) becomes H·g ≥ x and Σterms ≥ D·g over a fresh gate g.
// Gates occupy columns num_vars .. num_vars + #Cond - 1.
LinearSystem build_EH(const ConstraintSet& cs, const mpz_class& H);

// Linear consequence of E1 ∪ E2 over X, the Z leaves and fresh N_π:
// Σ_λ C_{λ,i} x_λ + Σ_{t,u} u_i z_{π,t,u} = C_i N_π, pairing, zeros, Σ N_π ≥ 1.
// Columns: X block, Z leaf block, then N_π. Needs cs.space().
struct MomentRelaxation {
  LinearSystem sys;
  std::vector<VarIndex> source;  // column -> variable of E, for X and Z columns
};
MomentRelaxation build_moment_relaxation(const ConstraintSet& cs);

struct NatSolution {
  std::vector<mpz_class> value;
};

// Multiplies by the lcm of the denominators.
std::vector<mpz_class> scale_to_nat(const std::vector<mpq_class>& point);

// First constraint violated under ℕ arithmetic, or -1.
std::int64_t first_violation_nat(const ConstraintSet& cs, const std::vector<mpz_class>& theta);

// Σ_π Σ_u y_{π,ε,u}: the domain size a witness asks for. Needs cs.space().
mpz_class witness_domain_size(const ConstraintSet& cs, const std::vector<mpz_class>& theta);

// Depth-first search over assignments with values ≤ bound; nullopt when none or
// the node budget runs out (`exhausted` tells which).
std::optional<std::vector<mpz_class>> bounded_search(const ConstraintSet& cs, const std::vector<bool>& known_zero,
                                                     std::uint64_t bound, std::uint64_t max_nodes, bool* exhausted);

enum class Verdict : std::uint8_t { Yes, No, ResourceExceeded };
const char* verdict_name(Verdict v);

struct FinsatOptions {
  Caps caps;
  unsigned small_h_shift = 20;  // H' = 3mC · 2^shift
  bool use_moment_relaxation = true;
  bool full_phase = true;
};

struct FinsatVerdict {
  Verdict verdict = Verdict::ResourceExceeded;
  std::optional<NatSolution> witness;
  bool witness_too_large = false;
  std::string method;  // which phase decided
  std::string note;
  std::uint64_t pivots = 0;
  std::size_t h_bits = 0;  // bit length of the full bound when computed
};

FinsatVerdict decide_finsat(const ConstraintSet& cs, const FinsatOptions& opt = {});

}  // namespace gc2

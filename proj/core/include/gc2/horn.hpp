#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gc2/constraints.hpp"

namespace gc2 {

// Proposition X_v reads "v = 0". A clause is body → head, head FALSE for goals.
class HornProgram {
 public:
  static constexpr std::int64_t kFalse = -1;

  explicit HornProgram(std::uint64_t num_props = 0) : nprops_(num_props) {}

  std::uint64_t num_props() const { return nprops_; }
  std::size_t size() const { return heads_.size(); }
  std::span<const VarIndex> body(std::size_t i) const {
    return {body_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::int64_t head(std::size_t i) const { return heads_[i]; }
  // Index of the constraint this clause came from.
  std::size_t origin(std::size_t i) const { return origin_[i]; }

  void add(std::span<const VarIndex> body, std::int64_t head, std::size_t origin = 0);

 private:
  std::uint64_t nprops_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VarIndex> body_;
  std::vector<std::int64_t> heads_;
  std::vector<std::size_t> origin_;
};

HornProgram to_horn(const ConstraintSet& cs);

struct HornResult {
  bool satisfiable = false;
  std::vector<bool> zero;  // least model: zero[v] iff X_v derived
  std::int64_t refuted_by = -1;  // goal clause that fired, when unsatisfiable
};

// Counter-based unit propagation to the least fixpoint.
HornResult horn_sat(const HornProgram& hp);

std::string dump_horn(const HornProgram& hp);

// Element of ℕ* = ℕ ∪ {ℵ₀}.
struct Star {
  bool aleph = false;
  mpz_class n = 0;
  static Star inf() { return {true, 0}; }
  bool positive() const { return aleph || n > 0; }
};

// Direct evaluation of E under the extended arithmetic; returns the first violated
// constraint index or -1.
std::int64_t first_violation_star(const ConstraintSet& cs, const std::vector<Star>& theta);

struct StarSolution {
  std::vector<bool> aleph;  // false means 0
};

struct SatVerdict {
  bool yes = false;
  std::optional<StarSolution> witness;
  std::uint64_t zero_count = 0;
};

// Throws InternalError if the witness fails direct evaluation.
SatVerdict decide_sat(const ConstraintSet& cs);

}  // namespace gc2

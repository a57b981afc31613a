#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gc2/error.hpp"

namespace gc2 {

enum class Rel : std::uint8_t { Eq, Ge, Le };

struct LinearRow {
  std::vector<std::pair<std::uint32_t, mpz_class>> coefs;  // sorted by column, no zeros
  Rel rel = Rel::Eq;
  mpz_class rhs = 0;
};

// Rows over nonnegative variables with exact integer coefficients.
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::uint64_t num_vars) : nvars_(num_vars) {}

  std::uint64_t num_vars() const { return nvars_; }
  std::uint32_t add_var() { return static_cast<std::uint32_t>(nvars_++); }
  // Merges repeated columns and drops zero coefficients.
  void add_row(LinearRow row);
  const std::vector<LinearRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // Optional column names for dumps; columns without a name print as v<i>.
  std::vector<std::string> names;

 private:
  std::uint64_t nvars_ = 0;
  std::vector<LinearRow> rows_;
};

std::string dump_linear_system(const LinearSystem& sys);
bool satisfies(const LinearSystem& sys, const std::vector<mpq_class>& point);

enum class LpStatus : std::uint8_t { Feasible, Infeasible, ResourceExceeded };
const char* lp_status_name(LpStatus s);

struct LpOptions {
  std::uint64_t max_pivots = 2'000'000;
  std::uint64_t max_columns = 400'000;  // after presolve
  const std::vector<bool>* known_zero = nullptr;  // columns zero in every solution
  bool presolve = true;
  // Double-precision basis search whose answer is certified exactly; the exact
  // simplex runs when certification fails.
  bool float_guide = true;
};

struct LpStats {
  std::uint64_t pivots = 0;
  std::uint64_t rows_in = 0, cols_in = 0;
  std::uint64_t rows_solved = 0, cols_solved = 0;
};

struct LpResult {
  LpStatus status = LpStatus::ResourceExceeded;
  std::vector<mpq_class> point;  // when feasible, satisfies every row exactly
  LpStats stats;
  std::string note;
};

// Exact feasibility over nonnegative rationals: presolve, a certified floating-point
// guide, then a fraction-free phase-1 simplex with Dantzig pricing and Bland's rule
// on degenerate stalls.
LpResult lp_feasible(const LinearSystem& sys, const LpOptions& opt = {});

}  // namespace gc2

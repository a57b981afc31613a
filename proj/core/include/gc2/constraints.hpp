#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gc2/typespace.hpp"

namespace gc2 {

using VarIndex = std::uint32_t;

enum class Family : std::uint8_t { X, Y, Z, YH, ZH };
const char* family_name(Family f);

// x_λ: pi = tp1(λ), lambda = position in Λ_π.
// y/z: node = heap position of s/t, u = vector index.
// yh/zh: node of s/t, v and w vector indices.
struct VarId {
  Family family = Family::X;
  OneType pi = 0;
  std::uint64_t lambda = 0;
  std::uint64_t node = 0;
  std::uint64_t u = 0, v = 0, w = 0;
  bool operator==(const VarId&) const = default;
};

// Shape parameters that fix V: enough to rebuild the layout from a dump.
struct Layout {
  unsigned p = 0;
  unsigned k = 0;
  std::vector<unsigned> counting;  // binary index of f_i
  std::vector<std::uint64_t> bounds;

  bool operator==(const Layout&) const = default;
  static Layout of(const TypeSpace& ts);
};

// V laid out as contiguous blocks X, Y, Z, YH, ZH; within a block by π, node, then vectors.
class VarSpace {
 public:
  // Throws CapExceeded when |V| exceeds max_vars.
  VarSpace(Layout layout, std::uint64_t max_vars);

  const Layout& layout() const { return layout_; }
  const VectorRange& range() const { return range_; }
  std::uint32_t P() const { return P_; }
  unsigned q() const { return q_; }
  std::uint64_t U() const { return range_.size(); }
  std::uint64_t num_inv() const { return inv_.size(); }
  const std::vector<Cross>& invertible_patterns() const { return inv_; }
  std::uint64_t y_nodes() const { return (std::uint64_t{2} << layout_.p) - 1; }
  std::uint64_t z_nodes() const { return (std::uint64_t{2} << q_) - 1; }

  std::uint64_t size() const { return total_; }
  std::uint64_t family_size(Family f) const { return count_[static_cast<int>(f)]; }
  std::uint64_t family_offset(Family f) const { return off_[static_cast<int>(f)]; }

  VarIndex x(OneType pi, std::uint64_t lambda) const {
    return static_cast<VarIndex>(off_[0] + static_cast<std::uint64_t>(pi) * P_ * inv_.size() + lambda);
  }
  VarIndex y(OneType pi, std::uint64_t node, std::uint64_t u) const {
    return static_cast<VarIndex>(off_[1] + (pi * y_nodes() + node) * U() + u);
  }
  VarIndex z(OneType pi, std::uint64_t node, std::uint64_t u) const {
    return static_cast<VarIndex>(off_[2] + (pi * z_nodes() + node) * U() + u);
  }
  VarIndex yh(OneType pi, std::uint64_t node, std::uint64_t v, std::uint64_t w) const {
    return static_cast<VarIndex>(off_[3] + ((pi * ((y_nodes() - 1) / 2) + node) * U() + v) * U() + w);
  }
  VarIndex zh(OneType pi, std::uint64_t node, std::uint64_t v, std::uint64_t w) const {
    return static_cast<VarIndex>(off_[4] + ((pi * ((z_nodes() - 1) / 2) + node) * U() + v) * U() + w);
  }
  VarIndex index(const VarId& id) const;
  VarId decode(VarIndex idx) const;

  std::string name(VarIndex idx) const;
  // Throws InvalidInput on malformed names.
  VarIndex parse_name(std::string_view text) const;

 private:
  Layout layout_;
  VectorRange range_;
  unsigned q_ = 0;
  std::uint32_t P_ = 0;
  std::vector<Cross> inv_;
  std::vector<std::uint32_t> inv_pos_;  // cross word -> position in inv_
  std::uint64_t count_[5] = {};
  std::uint64_t off_[5] = {};
  std::uint64_t total_ = 0;
};

enum class Kind : std::uint8_t { SumEq, SumGe1, Zero, Cond };

struct ConstraintRef {
  Kind kind;
  VarIndex target;                 // SumEq target, Zero variable, Cond antecedent
  std::span<const VarIndex> terms;  // SumEq, SumGe1, Cond
  std::uint64_t threshold;          // Cond
};

// Constraints in compressed rows. Variables are dense indices; `space` names them when present.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::shared_ptr<const VarSpace> space);
  // Anonymous variables v0..v{n-1}.
  explicit ConstraintSet(std::uint64_t num_vars);

  std::uint64_t num_vars() const { return nvars_; }
  const std::shared_ptr<const VarSpace>& space() const { return space_; }
  std::size_t size() const { return kinds_.size(); }
  ConstraintRef operator[](std::size_t i) const {
    return {kinds_[i], targets_[i],
            std::span<const VarIndex>(terms_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]),
            thresholds_[i]};
  }
  std::size_t count(Kind k) const;

  void add_sum_eq(VarIndex target, std::span<const VarIndex> terms);
  void add_ge1(std::span<const VarIndex> terms);
  void add_zero(VarIndex v);
  void add_cond(VarIndex antecedent, std::span<const VarIndex> terms, std::uint64_t threshold);

  std::string var_name(VarIndex v) const;
  std::uint64_t hash = 0;  // problem hash, 0 when unknown

  bool operator==(const ConstraintSet& o) const;

 private:
  void push(Kind k, VarIndex target, std::span<const VarIndex> terms, std::uint64_t th);

  std::shared_ptr<const VarSpace> space_;
  std::uint64_t nvars_ = 0;
  std::vector<Kind> kinds_;
  std::vector<VarIndex> targets_;
  std::vector<std::uint64_t> thresholds_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VarIndex> terms_;
};

std::shared_ptr<const VarSpace> build_variable_space(const TypeSpace& ts, const Caps& caps = {});

// E = E1 ∪ E2 ∪ E3 in display order.
ConstraintSet generate_E(const TypeSpace& ts, const Caps& caps = {});

std::string dump_constraints(const ConstraintSet& cs);
ConstraintSet load_constraints(std::string_view text, const Caps& caps = {});

}  // namespace gc2

#pragma once

#include <cstdint>
#include <vector>

#include "gc2/constraints.hpp"
#include "gc2/solver_nat.hpp"
#include "gc2/structure.hpp"

namespace gc2 {

// Functions f_{π,s} and g_{π,t} on the block A_π, elements numbered 0..size-1.
// f[node][a] and g[node][a] are vector indices; nodes are heap positions.
struct FGBlock {
  OneType pi = 0;
  std::uint64_t size = 0;
  std::vector<std::vector<std::uint32_t>> f;  // y-tree nodes
  std::vector<std::vector<std::uint32_t>> g;  // z-tree nodes
};

// Blocks are split in canonical order: preimages are cut in element order, pieces
// taken in increasing (v, w). Throws InvalidInput if θ violates E.
FGBlock build_fg(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta, OneType pi);

// Messages sent by each element of a block.
struct MessagePlan {
  struct Sender {
    // (leaf 1-type, Λ_π position) of each invertible message, sorted by leaf.
    std::vector<std::pair<OneType, std::uint64_t>> invertible;
    // (M_π position, count) of each non-invertible message type, sorted by position.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counted;
  };
  OneType pi = 0;
  std::vector<Sender> senders;
};

// Decomposes each f-leaf preimage into the sets A_λ and reads n_{a,t} off g.
MessagePlan plan_messages(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta,
                          const FGBlock& fg);

// Assembles blocks, invertible pairs, messages and fill. Elements are numbered block by block in π order.
// Throws CapExceeded when the domain exceeds max_witness, InvalidInput for a bad θ,
// InternalError if the result fails the checker.
Structure build_model(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta,
                      std::uint64_t max_witness = Caps{}.max_witness);

}  // namespace gc2

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gc2/error.hpp"
#include "gc2/problem.hpp"

namespace gc2 {

// Cross atoms of a 2-type: bit j of fwd is r_j(x,y), bit j of rev is r_j(y,x),
// j indexing sig.binary.
struct Cross {
  std::uint32_t fwd = 0;
  std::uint32_t rev = 0;
  bool operator==(const Cross&) const = default;
};

// A 1-type is its index: bit (p-1-j) holds the j-th signature atom, unary predicates
// first, then r(x,x) for binary r.
using OneType = std::uint32_t;

struct TwoType {
  OneType pi1 = 0;
  OneType pi2 = 0;
  Cross cross;
  bool operator==(const TwoType&) const = default;
};

inline TwoType invert(const TwoType& t) { return {t.pi2, t.pi1, {t.cross.rev, t.cross.fwd}}; }

enum class TypeClass : std::uint8_t { Invertible, Message, ReverseOnly, Silent };
const char* class_name(TypeClass c);

using CountVector = std::vector<std::uint64_t>;

// Vectors 0 ≤ u ≤ C, indexed in mixed radix with component 0 most significant.
class VectorRange {
 public:
  VectorRange() = default;
  explicit VectorRange(std::vector<std::uint64_t> bounds);

  std::size_t dim() const { return bounds_.size(); }
  std::uint64_t size() const { return size_; }
  const std::vector<std::uint64_t>& bounds() const { return bounds_; }
  std::uint64_t encode(const CountVector& u) const;
  CountVector decode(std::uint64_t idx) const;
  std::uint64_t top() const { return size_ - 1; }  // index of C
  bool contains(const CountVector& u) const;

 private:
  std::vector<std::uint64_t> bounds_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t size_ = 1;
};

std::string render_vector(const CountVector& u);

// Quantifier-free formula over x,y compiled to postfix code against a TypeSpace layout.
class CompiledQf {
 public:
  CompiledQf() = default;
  CompiledQf(const Formula& f, const Signature& sig);
  bool eval(const TwoType& t) const;

 private:
  enum class K : std::uint8_t { True, False, Bit1, Bit2, Fwd, Rev, Not, And, Or, Imp, Iff };
  struct Ins {
    K k;
    std::uint32_t arg;
  };
  void emit(const Formula& f, const Signature& sig);
  std::vector<Ins> code_;
  std::size_t depth_ = 0;
};

class TypeSpace {
 public:
  // Throws CapExceeded when |Σ| or the type families exceed the caps.
  TypeSpace(const NormalFormProblem& prob, const Caps& caps = {});

  const NormalFormProblem& problem() const { return prob_; }
  unsigned p() const { return p_; }
  std::uint32_t P() const { return P_; }
  unsigned k() const { return k_; }
  unsigned m() const { return static_cast<unsigned>(counting_.size()); }
  unsigned q() const { return q_; }
  std::uint64_t Q() const { return Q_; }
  std::uint64_t R() const { return R_; }
  const VectorRange& range() const { return range_; }
  // Binary index of f_i.
  const std::vector<unsigned>& counting() const { return counting_; }
  std::uint32_t counting_mask() const { return cmask_; }
  std::uint64_t D() const { return D_; }  // 3mC

  // Index bit holding signature atom j (unary j < #unary, else r(x,x) for binary j-#unary).
  unsigned bit_of(unsigned sig_pos) const { return p_ - 1 - sig_pos; }
  bool unary_holds(OneType pi, unsigned u) const { return (pi >> bit_of(u)) & 1u; }
  bool self_holds(OneType pi, unsigned r) const { return (pi >> bit_of(nunary_ + r)) & 1u; }
  unsigned num_unary() const { return nunary_; }

  TypeClass classify(const TwoType& t) const;
  CountVector c_vector(const TwoType& t) const;
  std::uint64_t c_index(const TwoType& t) const { return range_.encode(c_vector(t)); }
  bool alpha_holds(OneType pi) const;
  // True iff α fails at an endpoint or a guard conjunct fails in either orientation.
  bool is_forbidden(const TwoType& t) const;

  // Cross patterns per class, sorted by cross word.
  const std::vector<Cross>& invertible_patterns() const { return inv_; }
  const std::vector<Cross>& message_patterns() const { return msg_; }
  const std::vector<Cross>& silent_patterns() const { return sil_; }
  std::uint32_t cross_word(const Cross& c) const;

  // M_π: entry j < R is a non-invertible message, R ≤ j < Q a silent type.
  TwoType m_entry(OneType pi, std::uint64_t j) const;
  // Position in M_{tp1}, or -1 if t is not a non-invertible message or silent type.
  std::int64_t m_index(const TwoType& t) const;

  // Λ_π: entry j = pi2·|inv| + pattern index.
  std::uint64_t lambda_size() const { return static_cast<std::uint64_t>(P_) * inv_.size(); }
  TwoType lambda_entry(OneType pi, std::uint64_t j) const;
  std::int64_t lambda_index(const TwoType& t) const;

  // Fill type for unrelated pairs: both 1-types, no cross atoms.
  static TwoType silent_fill(OneType a, OneType b) { return {a, b, {0, 0}}; }

 private:
  bool universal_holds(const TwoType& t) const;

  NormalFormProblem prob_;
  unsigned p_ = 0, k_ = 0, q_ = 0, nunary_ = 0;
  std::uint32_t P_ = 0, cmask_ = 0;
  std::uint64_t Q_ = 0, R_ = 0, D_ = 0;
  std::vector<unsigned> counting_;
  VectorRange range_;
  CompiledQf alpha_;
  std::vector<std::pair<unsigned, CompiledQf>> guards_;
  std::vector<Cross> inv_, msg_, sil_;
  // cross word -> position within its class list
  std::vector<std::uint32_t> pos_;
};

// Bit string helpers: a string s of length len is stored as its integer value.
struct BitString {
  unsigned len = 0;
  std::uint64_t bits = 0;
  BitString child(unsigned b) const { return {len + 1, (bits << 1) | b}; }
  // Heap position: root 0, children 2i+1, 2i+2.
  std::uint64_t node() const { return ((std::uint64_t{1} << len) - 1) + bits; }
  static BitString from_node(std::uint64_t node);
  std::string str() const;
};

}  // namespace gc2

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "gc2/constraints.hpp"
#include "gc2/syntax.hpp"
#include "gc2/typespace.hpp"

namespace gc2 {

using Element = std::uint32_t;

// Finite structure with domain 0..n-1. Adjacency lists stay sorted.
class Structure {
 public:
  Structure() = default;
  // Only the predicate names of `sig` are used.
  Structure(const Signature& sig, Element n);

  Element size() const { return n_; }
  const Signature& sig() const { return sig_; }

  bool nullary(std::size_t k) const { return nullary_[k]; }
  void set_nullary(std::size_t k, bool v) { nullary_[k] = v; }
  bool unary(std::size_t u, Element a) const { return unary_[u][a]; }
  void set_unary(std::size_t u, Element a, bool v = true) { unary_[u][a] = v; }
  bool edge(std::size_t r, Element a, Element b) const;
  void add_edge(std::size_t r, Element a, Element b);
  const std::vector<Element>& out(std::size_t r, Element a) const { return out_[r][a]; }
  const std::vector<Element>& in(std::size_t r, Element a) const { return in_[r][a]; }
  std::uint64_t edge_count(std::size_t r) const;

  // Elements b ≠ a related to a by some binary predicate in either direction, sorted.
  std::vector<Element> partners(Element a) const;

  bool operator==(const Structure& o) const;

 private:
  Signature sig_;
  Element n_ = 0;
  std::vector<bool> nullary_;
  std::vector<std::vector<bool>> unary_;
  std::vector<std::vector<std::vector<Element>>> out_, in_;
};

// `domain N`, then `nullary p: true|false`, `unary p: e1 e2 ...`, `binary r: (a,b) ...`.
Structure parse_structure(std::string_view text);
std::string dump_structure(const Structure& st);

// Types of elements and pairs with respect to a problem signature; predicates missing
// from the structure read as false.
class TypeView {
 public:
  TypeView(const TypeSpace& ts, const Structure& st);
  OneType one(Element a) const { return one_[a]; }
  TwoType two(Element a, Element b) const;

 private:
  const TypeSpace& ts_;
  const Structure& st_;
  std::vector<int> bin_;  // problem binary index -> structure binary index
  std::vector<OneType> one_;
};

// Standard semantics; guarded quantifiers range over the guard's adjacency only.
bool evaluate(const Formula& f, const Structure& st, Element x = 0, Element y = 0);

struct NormalFormReport {
  std::optional<Element> alpha_fails;
  std::optional<std::pair<Element, Element>> forbidden_pair;
  struct Count {
    Element element;
    std::size_t index;
    std::uint64_t found;
  };
  std::optional<Count> count_wrong;
  bool ok() const { return !alpha_fails && !forbidden_pair && !count_wrong; }
  std::string describe() const;
};

NormalFormReport check_normal_form(const TypeSpace& ts, const Structure& st);

bool is_chromatic(const TypeSpace& ts, const Structure& st);

Structure duplicate(const Structure& st, Element copies);

// Greedy coloring of the graph of 1- and 2-chains of invertible message-types,
// written into the padding predicates. Output is over the problem signature.
Structure make_chromatic(const TypeSpace& ts, const Structure& st);

// Spectrum (s over Λ) or tally (t over M) of a, as sparse node -> vector index.
struct ElementSpectra {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sp;  // y-tree node, nonzero vector index
  std::vector<std::pair<std::uint64_t, std::uint64_t>> tl;  // z-tree node, nonzero vector index
};
ElementSpectra spectra(const TypeSpace& ts, const TypeView& tv, const Structure& st, Element a);
CountVector spectrum(const TypeSpace& ts, const Structure& st, Element a, const BitString& s);
CountVector tally(const TypeSpace& ts, const Structure& st, Element a, const BitString& t);

// θ of a finite model: made chromatic, duplicated 3mC times, then counted.
std::vector<mpz_class> solution_from_model(const TypeSpace& ts, const VarSpace& vs, const Structure& model);
// θ counted on the structure as given (no coloring, no duplication).
std::vector<mpz_class> count_solution(const TypeSpace& ts, const VarSpace& vs, const Structure& st);

// Exhaustive search for a model of the normal-form problem with 1..max_n elements.
std::optional<Structure> oracle_finsat(const TypeSpace& ts, Element max_n);
// Exhaustive search over all structures of a formula signature with 1..max_n elements.
std::optional<Structure> oracle_formula(const Signature& sig, const Formula& f, Element max_n,
                                        unsigned max_bits = 24);

}  // namespace gc2

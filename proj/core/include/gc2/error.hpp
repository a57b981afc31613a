#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gc2 {

// Input could not be read: bad syntax, unknown predicate, arity mismatch.
struct ParseError : std::runtime_error {
  std::size_t line;
  std::size_t column;
  ParseError(const std::string& what, std::size_t l, std::size_t c)
      : std::runtime_error(what + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l), column(c) {}
};

// Well-formed formula outside GC2.
struct GuardViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed problem, structure or solution handed to an operation.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured limit was hit. Never to be read as a negative verdict.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant. Indicates a bug.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct Caps {
  std::size_t max_signature = 16;
  std::uint64_t max_vars = 1'000'000;
  std::uint64_t max_witness = 100'000;
  std::size_t oracle_max = 6;
  std::size_t max_nullary = 10;
  std::uint64_t max_pivots = 2'000'000;
};

}  // namespace gc2

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gc2/error.hpp"

namespace gc2 {

enum class InputKind { Formula, NormalForm, Constraints, Structure };
const char* input_kind_name(InputKind k);

// Decided by the first keyword that is not a predicate header or comment.
InputKind detect_input(std::string_view text);

enum class Mode { Sat, Finsat, Both };

struct RunConfig {
  Mode mode = Mode::Both;
  Caps caps;
  std::string witness_path;           // empty: no witness file
  std::string dump_constraints_path;  // empty: no dump
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitInternal = 4;

// Everything a command produced; files are written by the caller.
struct Outcome {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
  std::vector<std::pair<std::string, std::string>> files;
};

Outcome cmd_check(std::string_view input, const RunConfig& cfg);
Outcome cmd_normalize(std::string_view input, const RunConfig& cfg);
Outcome cmd_constraints(std::string_view input, const RunConfig& cfg);
// Builds a finite model, writes it to cfg.witness_path (stdout when empty) after re-checking it.
Outcome cmd_model(std::string_view input, const RunConfig& cfg);
Outcome cmd_eval(std::string_view input, std::string_view structure, const RunConfig& cfg);
Outcome cmd_oracle(std::string_view input, const RunConfig& cfg);

}  // namespace gc2

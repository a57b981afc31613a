#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gc2/driver.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure and model builder for the guarded two-variable fragment with counting"};
  app.require_subcommand(1);

  gc2::RunConfig cfg;
  std::string mode = "both";
  std::string input, structure;
  std::size_t oracle_max = cfg.caps.oracle_max;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", input, "formula, normal-form or constraints file")->required();
    sub->add_option("--max-signature", cfg.caps.max_signature, "cap on |sig| after padding")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-vars", cfg.caps.max_vars, "cap on constraint variables")->check(CLI::PositiveNumber);
    sub->add_option("--max-witness", cfg.caps.max_witness, "cap on the size of a built model")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-pivots", cfg.caps.max_pivots, "cap on simplex pivots")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "decide satisfiability and finite satisfiability");
  common(check);
  check->add_option("--mode", mode, "sat, finsat or both")->check(CLI::IsMember({"sat", "finsat", "both"}));
  check->add_option("--witness", cfg.witness_path, "write a finite model here when one is found");
  check->add_option("--dump-constraints", cfg.dump_constraints_path, "write the constraint system here");

  auto* normalize = app.add_subcommand("normalize", "print the normal-form problems of a formula");
  common(normalize);

  auto* constraints = app.add_subcommand("constraints", "print the constraint system");
  common(constraints);
  constraints->add_option("--dump-constraints", cfg.dump_constraints_path, "write to this file instead");

  auto* model = app.add_subcommand("model", "build and verify a finite model");
  common(model);
  model->add_option("--witness", cfg.witness_path, "output structure file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "evaluate a formula or normal-form problem on a structure");
  common(eval);
  eval->add_option("structure", structure, "structure file")->required();

  auto* oracle = app.add_subcommand("oracle", "exhaustive search for small finite models");
  common(oracle);
  oracle->add_option("--oracle-max", oracle_max, "largest domain size tried")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : gc2::kExitInput;
  }

  cfg.mode = mode == "sat" ? gc2::Mode::Sat : mode == "finsat" ? gc2::Mode::Finsat : gc2::Mode::Both;
  cfg.caps.oracle_max = oracle_max;

  std::string text, stext;
  if (!read_file(input, text)) {
    std::cerr << "cannot read " << input << "\n";
    return gc2::kExitInput;
  }
  if (*eval && !read_file(structure, stext)) {
    std::cerr << "cannot read " << structure << "\n";
    return gc2::kExitInput;
  }

  gc2::Outcome o;
  if (*check) o = gc2::cmd_check(text, cfg);
  else if (*normalize) o = gc2::cmd_normalize(text, cfg);
  else if (*constraints) o = gc2::cmd_constraints(text, cfg);
  else if (*model) o = gc2::cmd_model(text, cfg);
  else if (*eval) o = gc2::cmd_eval(text, stext, cfg);
  else o = gc2::cmd_oracle(text, cfg);

  for (const auto& [path, content] : o.files) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) {
      std::cerr << "cannot write " << path << "\n";
      return gc2::kExitInput;
    }
  }
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit_code;
}

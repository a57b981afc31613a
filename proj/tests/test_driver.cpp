#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "gc2/driver.hpp"

using namespace gc2;

namespace {

std::string read_data(const char* name) {
  std::ifstream in(std::string(GC2_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

TEST_CASE("input detection") {
  CHECK(detect_input(test::kP0) == InputKind::NormalForm);
  CHECK(detect_input(test::kPsiInf) == InputKind::Formula);
  CHECK(detect_input(test::kP0Cycle) == InputKind::Structure);
  CHECK(detect_input("; comment\ngc2-constraints\n") == InputKind::Constraints);
}

TEST_CASE("check verdicts") {
  RunConfig cfg;
  Outcome o = cmd_check(read_data("p0.nf"), cfg);
  CHECK(o.exit_code == kExitOk);
  CHECK(starts_with(o.out, "SAT\nFINSAT\n"));
  cfg.mode = Mode::Sat;
  o = cmd_check("unary p\n(and (exists x (p x)) (forall x (not (p x))))", cfg);
  CHECK(starts_with(o.out, "UNSAT\n"));
}

TEST_CASE("exit codes") {
  RunConfig cfg;
  CHECK(cmd_check("(forall x (p x)", cfg).exit_code == kExitInput);
  CHECK(cmd_check("binary r\n(forall x (forall y (exists x (and (r x y) true))))", cfg).exit_code == kExitOk);
  cfg.caps.max_vars = 100;
  Outcome o = cmd_check(read_data("p1.nf"), cfg);
  CHECK(o.exit_code == kExitCap);
  CHECK(o.out.find("FINSAT") == std::string::npos);
}

TEST_CASE("model output is verified and parseable") {
  RunConfig cfg;
  Outcome o = cmd_model(read_data("p1.nf"), cfg);
  REQUIRE(o.exit_code == kExitOk);
  Structure st = parse_structure(o.out);
  TypeSpace ts(test::padded(test::kP1));
  CHECK(check_normal_form(ts, st).ok());
  Outcome e = cmd_eval(read_data("p1.nf"), o.out, cfg);
  CHECK(e.exit_code == kExitOk);
}

TEST_CASE("witness file from check") {
  RunConfig cfg;
  cfg.witness_path = "w.txt";
  Outcome o = cmd_check(read_data("p0.nf"), cfg);
  REQUIRE(o.files.size() == 1);
  CHECK(o.files[0].first == "w.txt");
  CHECK(parse_structure(o.files[0].second).size() > 0);
}

TEST_CASE("constraints round-trip through the driver") {
  RunConfig cfg;
  Outcome c = cmd_constraints(read_data("p0.nf"), cfg);
  REQUIRE(c.exit_code == kExitOk);
  Outcome o = cmd_check(c.out, cfg);
  CHECK(starts_with(o.out, "SAT\nFINSAT\n"));
}

TEST_CASE("oracle command") {
  RunConfig cfg;
  cfg.caps.oracle_max = 3;
  Outcome o = cmd_oracle(read_data("p1.nf"), cfg);
  CHECK(o.exit_code == kExitOk);
  CHECK(parse_structure(o.out).size() == 3);
}

TEST_CASE("check output is deterministic") {
  RunConfig cfg;
  Outcome a = cmd_check(read_data("p1.nf"), cfg), b = cmd_check(read_data("p1.nf"), cfg);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);
}

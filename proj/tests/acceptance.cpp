// Acceptance run: one line per criterion, exit status 1 if any fails.
// Usage: acceptance [path-to-gc2-binary]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gc2/driver.hpp"
#include "gc2/model_builder.hpp"
#include "support.hpp"

using namespace gc2;

namespace {

// Pinned tolerances.
constexpr std::size_t kCorpusSize = 60;
constexpr std::size_t kMinCorpus = 50;
constexpr std::uint64_t kCorpusMaxVars = 25'000;
constexpr std::uint64_t kCorpusSeed = 0x5eed;
constexpr double kSecondsPerProblem = 10.0;
constexpr Element kOracleYes = 4;   // a model this small must be found
constexpr Element kOracleNo = 5;    // NOT-FINSAT must survive this search
constexpr Element kOracleInf = 6;
constexpr std::uint64_t kInfMaxVars = 5'000'000;
constexpr int kHornSystems = 300;
constexpr std::uint64_t kHornMaxVars = 15;
constexpr int kNatSystems = 300;
constexpr std::uint64_t kNatMaxVars = 8;
constexpr std::uint64_t kNatBound = 6;

struct Result {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Case {
  NormalFormProblem problem;
  std::unique_ptr<TypeSpace> ts;
  ConstraintSet cs;
  FinsatVerdict fin;
  SatVerdict sat;
  std::optional<Structure> model;
  double seconds = 0;
};

std::vector<Case> solve_corpus() {
  std::vector<Case> out;
  for (auto& p : test::corpus(kCorpusSeed, kCorpusSize, kCorpusMaxVars)) {
    Case c;
    auto t0 = Clock::now();
    c.problem = p;
    c.ts = std::make_unique<TypeSpace>(p);
    c.cs = generate_E(*c.ts);
    c.sat = decide_sat(c.cs);
    c.fin = decide_finsat(c.cs);
    if (c.fin.verdict == Verdict::Yes && c.fin.witness && !c.fin.witness_too_large)
      c.model = build_model(*c.ts, c.cs, *c.fin.witness);
    c.seconds = seconds_since(t0);
    out.push_back(std::move(c));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool spectra_laws(const TypeSpace& ts, const Structure& st) {
  const CountVector C = ts.range().decode(ts.range().top());
  const std::size_t m = C.size();
  for (Element a = 0; a < st.size(); ++a) {
    CountVector sp = spectrum(ts, st, a, BitString{}), tl = tally(ts, st, a, BitString{});
    for (std::size_t i = 0; i < m; ++i)
      if (sp[i] + tl[i] != C[i]) return false;
    for (std::uint64_t node = 0; node + 1 < (std::uint64_t{1} << ts.p()); ++node) {
      BitString s = BitString::from_node(node);
      CountVector par = spectrum(ts, st, a, s), l = spectrum(ts, st, a, s.child(0)), r = spectrum(ts, st, a, s.child(1));
      for (std::size_t i = 0; i < m; ++i)
        if (par[i] != l[i] + r[i]) return false;
    }
    for (std::uint64_t node = 0; node + 1 < (std::uint64_t{1} << ts.q()); ++node) {
      BitString t = BitString::from_node(node);
      CountVector par = tally(ts, st, a, t), l = tally(ts, st, a, t.child(0)), r = tally(ts, st, a, t.child(1));
      for (std::size_t i = 0; i < m; ++i)
        if (par[i] != l[i] + r[i]) return false;
    }
  }
  return true;
}

// Hand-written models of P0 and P1 with their problems.
struct Hand {
  const char* name;
  NormalFormProblem problem;
  Structure model;
};

std::vector<Hand> hand_models() {
  std::vector<Hand> v;
  for (auto [name, nf, st] : {std::tuple{"P0", test::kP0, test::kP0Cycle}, std::tuple{"P1", test::kP1, test::kP1Cycle}}) {
    NormalFormProblem p = test::padded(nf);
    TypeSpace ts(p);
    v.push_back({name, p, make_chromatic(ts, parse_structure(st))});
  }
  return v;
}

Result c1_soundness(const std::vector<Case>& cases) {
  Result r;
  std::size_t models = 0;
  double worst = 0;
  if (cases.size() < kMinCorpus) r.fail("corpus has " + std::to_string(cases.size()) + " problems");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    worst = std::max(worst, c.seconds);
    if (c.seconds > kSecondsPerProblem) r.fail("problem " + std::to_string(i) + " took " + std::to_string(c.seconds) + "s");
    if (c.fin.verdict == Verdict::ResourceExceeded) r.fail("problem " + std::to_string(i) + " undecided");
    if (!c.model) continue;
    ++models;
    NormalFormReport rep = check_normal_form(*c.ts, *c.model);
    if (!rep.ok()) r.fail("problem " + std::to_string(i) + ": " + rep.describe());
  }
  if (r.ok) {
    std::ostringstream ss;
    ss << cases.size() << " problems, " << models << " models checked, slowest " << worst << "s";
    r.detail = ss.str();
  }
  return r;
}

Result c2_oracle(const std::vector<Case>& cases) {
  Result r;
  std::size_t yes = 0, no = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    if (c.fin.verdict == Verdict::No) {
      ++no;
      if (oracle_finsat(*c.ts, kOracleNo)) r.fail("problem " + std::to_string(i) + ": NOT-FINSAT but oracle model");
    } else if (oracle_finsat(*c.ts, kOracleYes)) {
      ++yes;
      if (c.fin.verdict != Verdict::Yes) r.fail("problem " + std::to_string(i) + ": oracle model but no FINSAT");
    }
  }
  if (r.ok) r.detail = std::to_string(yes) + " small models confirmed, " + std::to_string(no) + " NOT-FINSAT confirmed";
  return r;
}

Result c3_finite_general(const std::vector<Case>& cases) {
  Result r;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (cases[i].fin.verdict == Verdict::Yes) {
      ++n;
      if (!cases[i].sat.yes) r.fail("problem " + std::to_string(i) + ": FINSAT but UNSAT");
    }
  if (r.ok) r.detail = std::to_string(n) + " FINSAT verdicts, all SAT";
  return r;
}

Result c4_infinity() {
  Result r;
  ParsedFormula pf = parse_formula(test::kPsiInf);
  Caps caps;
  caps.max_vars = kInfMaxVars;
  auto branches = normalize(pf.formula, pf.sig, caps);
  if (branches.size() != 1) {
    r.fail("expected one branch");
    return r;
  }
  TypeSpace ts(branches[0].problem, caps);
  ConstraintSet cs = generate_E(ts, caps);
  auto t0 = Clock::now();
  SatVerdict sat = decide_sat(cs);
  FinsatOptions opt;
  opt.caps = caps;
  FinsatVerdict fin = decide_finsat(cs, opt);
  double secs = seconds_since(t0);
  if (!sat.yes) r.fail("verdict UNSAT");
  if (fin.verdict != Verdict::No) r.fail(std::string("finite verdict ") + verdict_name(fin.verdict));
  if (oracle_finsat(ts, kOracleInf)) r.fail("oracle found a finite model");
  if (r.ok) {
    std::ostringstream ss;
    ss << "|V|=" << cs.num_vars() << " SAT, NOT-FINSAT by " << fin.method << " in " << secs << "s, no model up to n="
       << kOracleInf;
    r.detail = ss.str();
  }
  return r;
}

Result c5_necessity(const std::vector<Case>& cases, const std::vector<Hand>& hands) {
  Result r;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    if (!c.model) continue;
    auto theta = solution_from_model(*c.ts, *c.cs.space(), *c.model);
    if (first_violation_nat(c.cs, theta) != -1) r.fail("problem " + std::to_string(i) + ": θ violates E");
    ++n;
  }
  for (const Hand& h : hands) {
    TypeSpace ts(h.problem);
    ConstraintSet cs = generate_E(ts);
    auto theta = solution_from_model(ts, *cs.space(), h.model);
    if (first_violation_nat(cs, theta) != -1) r.fail(std::string(h.name) + ": θ violates E");
  }
  if (r.ok) r.detail = std::to_string(n) + " built models and P0/P1 hand models";
  return r;
}

Result c6_counts() {
  Result r;
  auto expect = [&](const char* what, std::uint64_t got, std::uint64_t want) {
    if (got != want) r.fail(std::string(what) + "=" + std::to_string(got) + " expected " + std::to_string(want));
  };
  TypeSpace a(test::padded(test::kP0));
  expect("P", a.P(), 4);
  expect("p", a.p(), 2);
  expect("R", a.R(), 4);
  expect("Q", a.Q(), 8);
  expect("q", a.q(), 3);
  expect("|V|", build_variable_space(a)->size(), 352);
  TypeSpace b(test::padded("unary u\nbinary f\nalpha true\nguard f true\ncount f 1\nend\n"));
  expect("P", b.P(), 8);
  expect("Q", b.Q(), 16);
  expect("|V|", build_variable_space(b)->size(), 1504);
  if (r.ok) r.detail = "P=4 p=2 R=4 Q=8 q=3 |V|=352; P=8 Q=16 |V|=1504";
  return r;
}

Result c7_spectra(const std::vector<Case>& cases, const std::vector<Hand>& hands) {
  Result r;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (cases[i].model) {
      ++n;
      if (!spectra_laws(*cases[i].ts, *cases[i].model)) r.fail("problem " + std::to_string(i));
    }
  for (const Hand& h : hands) {
    TypeSpace ts(h.problem);
    if (!spectra_laws(ts, h.model)) r.fail(h.name);
    if (!spectra_laws(ts, duplicate(h.model, 3))) r.fail(std::string(h.name) + " x3");
  }
  if (r.ok) r.detail = std::to_string(n + 2 * hands.size()) + " structures, every element and node";
  return r;
}

Result c8_duplication(const std::vector<Case>& cases, const std::vector<Hand>& hands) {
  Result r;
  std::size_t n = 0;
  auto check = [&](const NormalFormProblem& p, const Structure& st, const std::string& name) {
    FormulaPtr phi = problem_formula(p);
    if (!evaluate(*phi, st)) r.fail(name + ": base structure fails");
    for (Element k : {2u, 3u})
      if (!evaluate(*phi, duplicate(st, k))) r.fail(name + " x" + std::to_string(k));
    ++n;
  };
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (cases[i].model) check(cases[i].problem, *cases[i].model, "problem " + std::to_string(i));
  for (const Hand& h : hands) check(h.problem, h.model, h.name);
  if (r.ok) r.detail = std::to_string(n) + " models, N in {2,3}";
  return r;
}

Result c9_solvers() {
  Result r;
  std::mt19937_64 rng(909);
  std::size_t hy = 0, ny = 0;
  for (int i = 0; i < kHornSystems; ++i) {
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, kHornMaxVars)(rng);
    ConstraintSet cs = test::random_system(rng, n, n + 3, 3);
    bool v = decide_sat(cs).yes;
    if (v != test::star_brute_force(cs)) r.fail("Horn disagrees on system " + std::to_string(i));
    hy += v;
  }
  for (int i = 0; i < kNatSystems; ++i) {
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, kNatMaxVars)(rng);
    ConstraintSet cs = test::random_system(rng, n, n + 1, 3);
    FinsatVerdict v = decide_finsat(cs);
    bool brute = test::nat_brute_force(cs, kNatBound);
    if (v.verdict == Verdict::ResourceExceeded) {
      r.fail("ℕ solver undecided on system " + std::to_string(i));
      continue;
    }
    bool yes = v.verdict == Verdict::Yes;
    if (yes && first_violation_nat(cs, v.witness->value) != -1) r.fail("bad ℕ witness on system " + std::to_string(i));
    if (brute && !yes) r.fail("ℕ solver misses a small solution on system " + std::to_string(i));
    if (yes && !brute) {
      mpz_class mx = 0;
      for (const auto& x : v.witness->value) mx = std::max(mx, x);
      if (mx <= kNatBound) r.fail("brute force misses a witness on system " + std::to_string(i));
    }
    ny += yes;
  }
  if (r.ok)
    r.detail = "Horn " + std::to_string(kHornSystems) + " systems (" + std::to_string(hy) + " SAT), ℕ " +
               std::to_string(kNatSystems) + " systems (" + std::to_string(ny) + " FINSAT)";
  return r;
}

std::string run_binary(const std::string& bin, const std::string& file) {
  std::string cmd = "'" + bin + "' check --mode both '" + file + "' 2>&1";
  std::string out;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    int status = pclose(p);
    out += "\nstatus " + std::to_string(status);
  }
  return out;
}

Result c10_determinism(const std::string& bin) {
  Result r;
  const std::string data = GC2_TEST_DATA;
  std::size_t n = 0;
  for (const char* f : {"p0.nf", "p1.nf"}) {
    std::string path = data + "/" + f;
    std::string a, b;
    if (bin.empty()) {
      RunConfig cfg;
      Outcome x = cmd_check(read_file(path), cfg), y = cmd_check(read_file(path), cfg);
      a = x.out + x.err;
      b = y.out + y.err;
    } else {
      a = run_binary(bin, path);
      b = run_binary(bin, path);
    }
    if (a.empty() || a != b) r.fail(std::string(f) + " output differs");
    ++n;
  }
  if (r.ok) r.detail = std::to_string(n) + " inputs, " + (bin.empty() ? "in-process" : "gc2 binary");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::string bin = argc > 1 ? argv[1] : "";
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Result()>& fn) {
    auto t0 = Clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %2d %-22s %s (%.1fs)\n", r.ok ? "PASS" : "FAIL", id, name, r.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !r.ok;
  };

  std::vector<Case> cases;
  std::vector<Hand> hands;
  try {
    cases = solve_corpus();
    hands = hand_models();
  } catch (const std::exception& e) {
    std::printf("setup failed: %s\n", e.what());
    return 1;
  }
  report(1, "end-to-end soundness", [&] { return c1_soundness(cases); });
  report(2, "oracle agreement", [&] { return c2_oracle(cases); });
  report(3, "finite implies general", [&] { return c3_finite_general(cases); });
  report(4, "infinity axiom", [&] { return c4_infinity(); });
  report(5, "necessity round-trip", [&] { return c5_necessity(cases, hands); });
  report(6, "counting identities", [&] { return c6_counts(); });
  report(7, "spectra laws", [&] { return c7_spectra(cases, hands); });
  report(8, "duplication", [&] { return c8_duplication(cases, hands); });
  report(9, "solver cross-checks", [&] { return c9_solvers(); });
  report(10, "determinism", [&] { return c10_determinism(bin); });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

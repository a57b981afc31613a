#include "doctest.h"
#include "support.hpp"
#include "gc2/model_builder.hpp"

using namespace gc2;

namespace {

struct Solved {
  TypeSpace ts;
  ConstraintSet cs;
  NatSolution theta;
};

Solved solve(const char* text) {
  TypeSpace ts(test::padded(text));
  ConstraintSet cs = generate_E(ts);
  FinsatVerdict v = decide_finsat(cs);
  REQUIRE(v.verdict == Verdict::Yes);
  return {std::move(ts), std::move(cs), *v.witness};
}

}  // namespace

TEST_CASE("f and g realise y and z at every node") {
  for (const char* text : {test::kP0, test::kP1}) {
    Solved s = solve(text);
    const VarSpace& vs = *s.cs.space();
    for (OneType pi = 0; pi < s.ts.P(); ++pi) {
      FGBlock fg = build_fg(s.ts, s.cs, s.theta, pi);
      mpz_class size = 0;
      for (std::uint64_t u = 0; u < vs.U(); ++u) size += s.theta.value[vs.y(pi, 0, u)];
      CHECK(size == fg.size);
      for (std::uint64_t node = 0; node < fg.f.size(); ++node) {
        REQUIRE(fg.f[node].size() == fg.size);
        std::vector<std::uint64_t> count(vs.U(), 0);
        for (auto idx : fg.f[node]) ++count[idx];
        for (std::uint64_t u = 0; u < vs.U(); ++u) CHECK(count[u] == s.theta.value[vs.y(pi, node, u)]);
      }
      for (std::uint64_t node = 0; node < fg.g.size(); ++node) {
        std::vector<std::uint64_t> count(vs.U(), 0);
        for (auto idx : fg.g[node]) ++count[idx];
        for (std::uint64_t u = 0; u < vs.U(); ++u) CHECK(count[u] == s.theta.value[vs.z(pi, node, u)]);
      }
      // f at the root plus g at the root is C for each element.
      const CountVector C = s.ts.range().decode(s.ts.range().top());
      for (std::uint64_t a = 0; a < fg.size; ++a) {
        CountVector fu = s.ts.range().decode(fg.f[0][a]), gu = s.ts.range().decode(fg.g[0][a]);
        for (std::size_t i = 0; i < C.size(); ++i) CHECK(fu[i] + gu[i] == C[i]);
      }
    }
  }
}

TEST_CASE("message plans add up to C") {
  for (const char* text : {test::kP0, test::kP1}) {
    Solved s = solve(text);
    for (OneType pi = 0; pi < s.ts.P(); ++pi) {
      FGBlock fg = build_fg(s.ts, s.cs, s.theta, pi);
      MessagePlan plan = plan_messages(s.ts, s.cs, s.theta, fg);
      REQUIRE(plan.senders.size() == fg.size);
      const CountVector C = s.ts.range().decode(s.ts.range().top());
      for (const auto& snd : plan.senders) {
        CountVector total(C.size(), 0);
        OneType prev = 0;
        bool first = true;
        for (auto [leaf, lam] : snd.invertible) {
          if (!first) CHECK(prev < leaf);  // one invertible message per leaf
          prev = leaf;
          first = false;
          CountVector c = s.ts.c_vector(s.ts.lambda_entry(pi, lam));
          for (std::size_t i = 0; i < C.size(); ++i) total[i] += c[i];
        }
        for (auto [pos, n] : snd.counted) {
          CountVector c = s.ts.c_vector(s.ts.m_entry(pi, pos));
          for (std::size_t i = 0; i < C.size(); ++i) total[i] += c[i] * n;
        }
        CHECK(total == C);
      }
    }
  }
}

TEST_CASE("built models are chromatic normal-form models") {
  for (const char* text : {test::kP0, test::kP1}) {
    Solved s = solve(text);
    Structure st = build_model(s.ts, s.cs, s.theta);
    CHECK(check_normal_form(s.ts, st).ok());
    CHECK(is_chromatic(s.ts, st));
    CHECK(st.size() == witness_domain_size(s.cs, s.theta.value));
    CHECK(dump_structure(build_model(s.ts, s.cs, s.theta)) == dump_structure(st));
  }
}

TEST_CASE("corpus models") {
  int built = 0;
  for (const auto& p : test::corpus(31, 15, 20'000)) {
    TypeSpace ts(p);
    ConstraintSet cs = generate_E(ts);
    FinsatVerdict v = decide_finsat(cs);
    if (v.verdict != Verdict::Yes || v.witness_too_large) continue;
    Structure st = build_model(ts, cs, *v.witness);
    CHECK(check_normal_form(ts, st).ok());
    ++built;
  }
  CHECK(built > 0);
}

TEST_CASE("witness cap and bad solutions") {
  Solved s = solve(test::kP0);
  CHECK_THROWS_AS(build_model(s.ts, s.cs, s.theta, 1), CapExceeded);
  NatSolution zero{std::vector<mpz_class>(s.cs.num_vars(), 0)};
  CHECK_THROWS_AS(build_model(s.ts, s.cs, zero), InvalidInput);
}

#include <benchmark/benchmark.h>

#include <string>

#include "gc2/constraints.hpp"
#include "gc2/horn.hpp"
#include "gc2/lp.hpp"
#include "gc2/model_builder.hpp"
#include "gc2/normalizer.hpp"
#include "gc2/solver_nat.hpp"
#include "gc2/typespace.hpp"

namespace {

using namespace gc2;

const char* kP0 = "binary f\nalpha true\nguard f true\ncount f 1\nend\n";
const char* kP1 = "binary f\nalpha true\nguard f (not (f y x))\ncount f 1\nend\n";
const char* kUnary = "unary u\nbinary f\nalpha true\nguard f (imp (u x) (not (u y)))\ncount f 1\nend\n";
const char* kSym2 =
    "binary r0\nalpha true\nguard r0 (imp (and (r0 y x) (not (r0 x y))) (r0 x y))\ncount r0 2\nend\n";

const char* problem(int i) {
  switch (i) {
    case 0: return kP0;
    case 1: return kP1;
    case 2: return kUnary;
    default: return kSym2;
  }
}

struct Fixture {
  TypeSpace ts;
  ConstraintSet cs;
  explicit Fixture(const char* text) : ts(pad_signature(parse_normal_form(text))), cs(generate_E(ts)) {}
};

void BM_GenerateE(benchmark::State& st) {
  TypeSpace ts(pad_signature(parse_normal_form(problem(static_cast<int>(st.range(0))))));
  for (auto _ : st) benchmark::DoNotOptimize(generate_E(ts));
  st.counters["vars"] = static_cast<double>(generate_E(ts).num_vars());
}
BENCHMARK(BM_GenerateE)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_DecideSat(benchmark::State& st) {
  Fixture f(problem(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(decide_sat(f.cs));
}
BENCHMARK(BM_DecideSat)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_DecideFinsat(benchmark::State& st) {
  Fixture f(problem(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(decide_finsat(f.cs));
}
BENCHMARK(BM_DecideFinsat)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Exact simplex against the float-guided path on the same E_H.
void BM_LpEH(benchmark::State& st) {
  Fixture f(problem(static_cast<int>(st.range(0))));
  LinearSystem sys = build_EH(f.cs, mpz_class(1) << 20);
  LpOptions opt;
  opt.float_guide = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(lp_feasible(sys, opt));
}
BENCHMARK(BM_LpEH)->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BuildModel(benchmark::State& st) {
  Fixture f(problem(static_cast<int>(st.range(0))));
  FinsatVerdict v = decide_finsat(f.cs);
  if (!v.witness) {
    st.SkipWithError("no witness");
    return;
  }
  for (auto _ : st) benchmark::DoNotOptimize(build_model(f.ts, f.cs, *v.witness));
}
BENCHMARK(BM_BuildModel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

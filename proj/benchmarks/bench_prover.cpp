// Rule compilation and proof search timings; compare super against unfold via the Arg.

#include <benchmark/benchmark.h>

#include "supded/btheory.hpp"
#include "supded/driver.hpp"
#include "supded/syntax.hpp"

using namespace supded;

static void BM_CompileBSet(benchmark::State& st) {
  for (auto _ : st) {
    RuleSet rs = build_b_rules(st.range(0) ? BMode::Super : BMode::Unfold);
    benchmark::DoNotOptimize(rs);
  }
}
BENCHMARK(BM_CompileBSet)->Arg(1)->Arg(0);

static void BM_InverseOfInverse(benchmark::State& st) {
  const RuleSet& rs = b_rules(st.range(0) ? BMode::Super : BMode::Unfold);
  Formula goal = parse_formula("~((subseteq(p, prod(a,b)) & in(x,p)) => in(x, inv(inv(p))))");
  int nodes = 0;
  for (auto _ : st) {
    ProofResult r = prove({goal}, rs);
    nodes = r.nodes();
    benchmark::DoNotOptimize(r);
  }
  st.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_InverseOfInverse)->Arg(1)->Arg(0)->Unit(benchmark::kMicrosecond);

static void BM_SetCorpus(benchmark::State& st) {
  RunConfig cfg;
  cfg.theory = "b-set";
  cfg.super = st.range(0) != 0;
  for (auto _ : st) {
    auto rows = bench(SUPDED_CORPUS_DIR "/set", cfg, 1, "");
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_SetCorpus)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

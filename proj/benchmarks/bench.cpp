#include "tangle/gates.hpp"
#include "tangle/rewrite.hpp"
#include "tangle/turing.hpp"

#include <benchmark/benchmark.h>

using namespace tangle;

namespace {

const char* kSweep =
    "states 3 0 2\n"
    "delta 0 0 -> 1 1 2\n"
    "delta 1 0 -> 1 1 2\n"
    "delta 1 1 -> 2 1 1\n"
    "delta 0 1 -> 2 1 1\n";

const IPParams kHalf{Rat(1), Rat(1, 2), Rat(1, 2)};

void BM_CompileTM(benchmark::State& state) {
  TMSpec spec = parse_tm(kSweep);
  int steps = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(compile_tm(spec, 8, steps));
  state.SetComplexityN(steps);
}
BENCHMARK(BM_CompileTM)->Range(1, 16)->Complexity(benchmark::oN);

void BM_RunCompiledTM(benchmark::State& state) {
  TMSpec spec = parse_tm(kSweep);
  int steps = static_cast<int>(state.range(0));
  CompiledTM ct = compile_tm(spec, 8, steps);
  TMConfig start;
  start.q = spec.q0;
  start.p = 1;
  start.tape.assign(8, 0);
  start.tape[3] = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_compiled(ct, start));
}
BENCHMARK(BM_RunCompiledTM)->Range(1, 16);

void BM_GateEval(benchmark::State& state) {
  Backend be = state.range(0) ? Backend::Fox3 : Backend::Quagma;
  TangleMachine m = build_gate(GateKind::And, be);
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_bits(m, be, {true, false}));
}
BENCHMARK(BM_GateEval)->Arg(0)->Arg(1);

void BM_LadderPropagate(benchmark::State& state) {
  BeliefNetwork net = ladder_network(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate_network(net, kHalf));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LadderPropagate)->Range(2, 64)->Complexity(benchmark::oN);

void BM_FindMoves(benchmark::State& state) {
  Quagma q = belief_quagma();
  TangleMachine m = canonicalize(ladder_network(static_cast<int>(state.range(0))).m);
  for (auto _ : state)
    benchmark::DoNotOptimize(find_moves(m, q));
}
BENCHMARK(BM_FindMoves)->Range(2, 32);

void BM_ExploreEquivalents(benchmark::State& state) {
  Quagma q = belief_quagma();
  TangleMachine m = canonicalize(ladder_network(4).m);
  std::set<MoveKind> kinds{MoveKind::R3, MoveKind::QuagmaR3};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        explore_equivalents(m, q, static_cast<int>(state.range(0)), 128, kinds));
}
BENCHMARK(BM_ExploreEquivalents)->DenseRange(1, 3);

void BM_PcpRun(benchmark::State& state) {
  IPParams p{Rat(1), Rat(3, 4), Rat(99, 100)};
  long trials = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(pcp_run(p, false, trials, 7));
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_PcpRun)->Range(1000, 64000);

}  // namespace

BENCHMARK_MAIN();

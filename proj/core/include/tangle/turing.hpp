#pragma once

#include "tangle/colouring.hpp"

namespace tangle {

struct TuringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symbols are {0,1,2}; eps in {0,1,2} moves the head by eps-1 (1 = stay).
// The halting state gets implicit stationary self-loops (q_h, u) -> (q_h, u, 1),
// so a halted configuration is a fixed point of the step map.
struct TMSpec {
  int n_states = 0;
  int q0 = 0, qh = 0;
  std::map<std::pair<int, int>, std::tuple<int, int, int>> delta;  // (q,u) -> (q',a,eps)
};

// Text format:
//   states <n> <q0> <qh>
//   delta <q> <u> -> <q'> <a> <eps>
TMSpec parse_tm(const std::string& text);

struct TMConfig {
  int q = 0;
  std::vector<int> tape;  // fixed length m
  int p = 1;              // 1-based head position in 1..m
  bool operator==(const TMConfig&) const = default;
};

// One step of the reference interpreter. Throws TuringError on a missing
// transition or if the head leaves 1..m.
TMConfig reference_step(const TMSpec& spec, const TMConfig& c);
// steps+1 configurations including the initial one.
std::vector<TMConfig> reference_run(const TMSpec& spec, TMConfig c, int steps);

struct CompiledTM {
  TangleMachine m;
  int tape_len = 0, steps = 0;
  // per-configuration registers, k = 0..steps
  std::vector<RegisterId> q_regs, p_regs;
  std::vector<std::vector<RegisterId>> cell_regs;
  std::vector<RegisterId> u_regs;  // symbol read at step k, k = 0..steps-1
};

// Compiles `steps` hardwired step units over a fixed tape window of length m.
// Everything is a linear-quandle gadget: adders, indicator and mask one-hots,
// wye-based selectors, and the per-transition matched/unmatched maxima. A
// bounds gadget per step pins a produced register so that a head escape makes
// the colouring inconsistent rather than silently wrong.
// closed = true splices the final configuration registers back onto the
// initial ones; the machine then has no inputs and is evaluated by seeding.
CompiledTM compile_tm(const TMSpec& spec, int tape_len, int steps, bool closed = false);

// Propagates the compiled machine on the given start configuration and decodes
// the trajectory back out of the register colours.
std::vector<TMConfig> run_compiled(const CompiledTM& ct, const TMConfig& start);

// Number of distinct operation labels in a machine (compile_tm keeps this
// linear in the state count).
size_t op_count(const TangleMachine& m);

}  // namespace tangle

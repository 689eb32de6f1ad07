#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tangle/turing.hpp"

using namespace tangle;

namespace {

// writes 1s rightward until it sees a 1, then halts on it
const char* kSweep =
    "states 3 0 2\n"
    "delta 0 0 -> 1 1 2\n"
    "delta 1 0 -> 1 1 2\n"
    "delta 1 1 -> 2 1 1\n"
    "delta 0 1 -> 2 1 1\n";

// single left-mover, used to drive the head off the window
const char* kLeft =
    "states 2 0 1\n"
    "delta 0 0 -> 0 0 0\n"
    "delta 0 1 -> 1 1 1\n";

}  // namespace

TEST_CASE("tm text parsing") {
  TMSpec s = parse_tm(kSweep);
  CHECK(s.n_states == 3);
  CHECK(s.q0 == 0);
  CHECK(s.qh == 2);
  CHECK(s.delta.size() == 4);
  CHECK_THROWS_AS(parse_tm("delta 0 0 -> 0 0 0\n"), TuringError);  // no states
  CHECK_THROWS_AS(parse_tm("states 2 0 5\n"), TuringError);        // qh range
  CHECK_THROWS_AS(parse_tm("states 2 0 1\ndelta 0 7 -> 0 0 0\n"), TuringError);
  CHECK_THROWS_AS(parse_tm("states 2 0 1\ndelta 0 0 -> 0 0 9\n"), TuringError);
}

// [DERIVED] oracle trajectory frozen from manual simulation of kSweep
TEST_CASE("reference interpreter") {
  TMSpec s = parse_tm(kSweep);
  auto traj = reference_run(s, {0, {0, 0, 0, 1}, 1}, 4);
  REQUIRE(traj.size() == 5);
  CHECK(traj[1] == TMConfig{1, {1, 0, 0, 1}, 2});
  CHECK(traj[2] == TMConfig{1, {1, 1, 0, 1}, 3});
  CHECK(traj[3] == TMConfig{1, {1, 1, 1, 1}, 4});
  CHECK(traj[4] == TMConfig{2, {1, 1, 1, 1}, 4});
  // halting configuration is a fixed point
  CHECK(reference_step(s, traj[4]) == traj[4]);

  CHECK_THROWS_AS(reference_run(parse_tm(kLeft), {0, {0, 0}, 1}, 1), TuringError);
}

TEST_CASE("compiled machine reproduces the reference trajectory") {
  TMSpec s = parse_tm(kSweep);
  CompiledTM ct = compile_tm(s, 4, 5);
  TMConfig start{0, {0, 0, 0, 1}, 1};
  auto want = reference_run(s, start, 5);
  auto got = run_compiled(ct, start);
  CHECK(got == want);
}

TEST_CASE("compiled machine on several starts") {
  TMSpec s = parse_tm(kSweep);
  CompiledTM ct = compile_tm(s, 3, 3);
  for (TMConfig start : {TMConfig{0, {0, 1, 0}, 1}, TMConfig{0, {1, 1, 1}, 1},
                         TMConfig{0, {0, 0, 1}, 2}}) {
    CHECK(run_compiled(ct, start) == reference_run(s, start, 3));
  }
}

TEST_CASE("head escape makes the colouring inconsistent") {
  TMSpec s = parse_tm(kLeft);
  CompiledTM ct = compile_tm(s, 2, 1);
  // from p=1 the single transition moves left, off the window
  CHECK_THROWS_AS(run_compiled(ct, {0, {0, 0}, 1}), TuringError);
  // in-range start is fine
  CHECK(run_compiled(ct, {0, {0, 1}, 2}) == reference_run(s, {0, {0, 1}, 2}, 1));
}

TEST_CASE("closed machine accepts the halting configuration as a fixed point") {
  TMSpec s = parse_tm(kSweep);
  CompiledTM ct = compile_tm(s, 3, 2, /*closed=*/true);
  CHECK(ct.m.inputs.empty());
  CHECK(ct.m.outputs.empty());
  // halting config: stationary self-loops keep (q, tape, p) constant
  TMConfig halt{2, {1, 1, 1}, 2};
  auto traj = run_compiled(ct, halt);
  for (const auto& c : traj) CHECK(c == halt);
  // a non-fixed-point seed cannot close the loop
  CHECK_THROWS_AS(run_compiled(ct, {0, {0, 0, 1}, 1}), TuringError);
}

// The compilation scheme only ever mints ops from {1/2, 2, 4} + one per
// distinct transition-target value, so distinct labels stay linear in n.
TEST_CASE("op count is linear in the state count") {
  TMSpec s = parse_tm(kSweep);
  for (int steps : {1, 3, 6}) {
    CompiledTM ct = compile_tm(s, 4, steps);
    CHECK(op_count(ct.m) <= static_cast<size_t>(9 * s.n_states + 9));
    // steps don't add labels
    CHECK(op_count(ct.m) == op_count(compile_tm(s, 4, 1).m));
  }
}

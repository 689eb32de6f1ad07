#pragma once

#include "tangle/belief.hpp"
#include "tangle/colouring.hpp"
#include "tangle/diagram.hpp"

#include <set>
#include <string>
#include <vector>

namespace tangle {

struct RewriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The move catalogue. Purely cosmetic moves (virtual, flype, slide-twist and
// friends) change a planar drawing but not the combinatorial diagram, so they
// act as the identity on the IR; the interesting surgery lives in R1, R2,
// R3/QuagmaR3, UC and YR3. There is deliberately no move that splits an agent
// across interactions (the "fake R2"/"fake R3" shapes are not expressible).
enum class MoveKind {
  R1,
  R2,
  R3,
  QuagmaR3,
  VR1,
  VR2,
  VR3,
  SV,
  UC,
  ST,
  I1,
  I2,
  I3,
  FM1,
  FM2,
  VYR1,
  YR3,
  VYR3,
};

enum class MoveDir { Apply, Undo };

struct Move {
  MoveKind kind = MoveKind::R1;
  MoveDir dir = MoveDir::Apply;
  OpLabel op1{};  // R1/R2 insertion op; QuagmaR3 inner op
  OpLabel op2{};  // QuagmaR3 outer op
  bool operator==(const Move&) const = default;
};

// A site pins the pattern a move touches on one specific machine; indices
// and ids are only meaningful against that machine (apply_move canonicalizes
// its result, so re-run find_moves before chaining).
struct Site {
  std::vector<size_t> inters;
  std::vector<size_t> wye_idx;
  std::vector<RegisterId> regs;
  bool operator==(const Site&) const = default;
};

std::string move_str(const Move& mv);
std::string site_str(const Site& s);

// All move kind names, for catalogue inspection.
std::vector<std::string> move_catalogue();

// Every applicable (move, site) pair. Sites never involve S_in/S_out
// registers. QuagmaR3 pairs are admitted only when the outer op distributes
// over the inner one on the quagma's carrier; YR3 admission is guarded by a
// sampled colour-preservation check (the wye label may flip).
std::vector<std::pair<Move, Site>> find_moves(const TangleMachine& m, const Quagma& q);

// Performs the surgery and returns the canonicalized result; throws
// RewriteError when the site does not match the pattern.
TangleMachine apply_move(const TangleMachine& m, const Quagma& q, const Move& mv,
                         const Site& site);

// Weak bisimulation: evaluate_io agrees exactly on sampled inputs
// (exhaustive on Fox-3). Mismatched S_in/S_out arities mean the machines
// cannot carry out the same computations, so the result is false.
bool check_bisimilar(const TangleMachine& m1, const TangleMachine& m2,
                     const Quagma& q, SampleBudget budget = {1, 100});

// Belief-network variant: exact equality of propagated S_out beliefs.
bool check_bisimilar(const TangleMachine& m1, const TangleMachine& m2,
                     const IPParams& p);

// Breadth-first closure under apply_move, up to max_moves applications deep
// and max_machines distinct canonical forms; optionally restricted to a set
// of move kinds. Deduplicates by canonical serialization; the result is
// sorted by it, so worker fan-out merges deterministically.
std::vector<TangleMachine> explore_equivalents(
    const TangleMachine& m, const Quagma& q, int max_moves, size_t max_machines,
    const std::set<MoveKind>& kinds = {});

// The quagma tag under which belief networks are rewritten.
Quagma belief_quagma();

struct ZkVerdict {
  enum class Kind { Zk, NotZk, NotDeciding };
  Kind kind = Kind::NotDeciding;
  std::string reason;
};

// Zero knowledge: the machine decides at its terminal register, no
// intermediate register (produced and later consumed) decides, and some
// equivalent machine within the slide-move budget exposes a deciding
// intermediate.
ZkVerdict is_zero_knowledge(const BeliefNetwork& net, const IPParams& p,
                            const Rat& kappa, unsigned word_len, int budget);

}  // namespace tangle

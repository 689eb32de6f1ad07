#pragma once

#include "tangle/colour.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tangle {

// Binary operation labels. x ▷ y reads "patient x updated by agent y".
//   Linear(s):      x ▷ y = (1-s)x + sy, s != 1  (rationals or entrywise on matrices)
//   Conj:           x ▷ y = y⁻¹xy            (errors on singular y)
//   ConjGuarded:    x ▷ y = y⁻¹xy if det(y) != 0, else x
//   ConjInv / ConjGuardedInv: the propagation inverses y·x·y⁻¹ (the family
//                   must be closed under invert(); these are that closure)
//   Fox3:           x ▷ y = 2y - x mod 3
//   Belief:         placeholder tag for deformed-IP networks; apply() rejects it,
//                   beliefnet gives it semantics.
enum class OpKind { Linear, Conj, ConjInv, ConjGuarded, ConjGuardedInv, Fox3, Belief };

struct OpLabel {
  OpKind kind = OpKind::Fox3;
  Rat s;  // meaningful only for Linear

  static OpLabel linear(Rat s) { return {OpKind::Linear, std::move(s)}; }
  static OpLabel conj() { return {OpKind::Conj, 0}; }
  static OpLabel conj_guarded() { return {OpKind::ConjGuarded, 0}; }
  static OpLabel fox3() { return {OpKind::Fox3, 0}; }
  static OpLabel belief() { return {OpKind::Belief, 0}; }

  bool operator==(const OpLabel&) const = default;
  bool operator<(const OpLabel& o) const {
    if (kind != o.kind) return kind < o.kind;
    return s < o.s;
  }
};

std::string op_str(const OpLabel& op);
std::optional<OpLabel> parse_op(std::string_view s);

// x ▷_op y. Throws KindMismatch on carrier mismatch, std::domain_error on
// singular Conj agent, std::invalid_argument on Linear(1) or Belief.
Colour apply(const OpLabel& op, const Colour& x, const Colour& y);

// The op' with apply(op', apply(op, x, y), y) == x for all x, y.
OpLabel invert(const OpLabel& op);

enum class CarrierKind { Fox3, Rational, Matrix2 };
enum class StructureClass { Quandle, Quagma };

struct Quagma {
  std::string name;
  CarrierKind carrier;
  std::vector<OpLabel> ops;
  StructureClass cls;
};

Quagma fox3_quandle();
// Linear quandle over Q with the default op set {▷1/2, ▷2, ▷-1}.
Quagma linear_quandle(std::vector<Rat> params = {Rat(1, 2), Rat(2), Rat(-1)});
// 2x2 exact matrices with {▷1/2, ▷2, ConjGuarded}: a quagma, not a quandle.
Quagma mixed_quagma();

enum class Axiom {
  Idempotence,          // x ▷ x = x
  Reversibility,        // exists/inverse: (x ▷ y) ▷' y = x
  SelfDistributivity,   // (x▷y)▷z = (x▷z)▷(y▷z), one op
  MutualDistributivity  // (x ▷a u) ▷b v = (x ▷b v) ▷a (u ▷b v), ordered op pairs
};

struct SampleBudget {
  uint64_t seed = 1;
  int samples = 500;  // per op (pair); Fox3 is checked exhaustively regardless
};

struct AxiomWitness {
  OpLabel op1, op2;  // op2 meaningful for Reversibility/MutualDistributivity
  Colour x, y, z;
  Colour lhs, rhs;
};

struct AxiomReport {
  bool pass = true;
  long checked = 0;
  std::optional<AxiomWitness> witness;
};

AxiomReport check_axioms(const Quagma& q, Axiom a, SampleBudget b = {});

// True iff b distributes over a on this carrier: for all x,u,v,
// (x ▷a u) ▷b v == (x ▷b v) ▷a (u ▷b v). Seeded sampling (exhaustive on Fox3).
// This is the legality condition for sliding a b-crossing across an a-crossing.
bool distributes_over(const OpLabel& b, const OpLabel& a, CarrierKind carrier,
                      SampleBudget budget = {});

// Seeded sample colours for a carrier (used by axiom checks and bisimulation).
std::vector<Colour> sample_colours(CarrierKind carrier, int n, uint64_t seed,
                                   bool invertible_only = false);

}  // namespace tangle

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tangle/algebra.hpp"

using namespace tangle;

TEST_CASE("rational parsing and printing") {
  CHECK(rat_str(*parse_rat("3/4")) == "3/4");
  CHECK(rat_str(*parse_rat("-6/8")) == "-3/4");
  CHECK(rat_str(*parse_rat("5")) == "5");
  CHECK(!parse_rat("1/0"));
  CHECK(!parse_rat("a/b"));
  CHECK(rat_str(rat_pow(Rat(1, 2), 5)) == "1/32");
}

TEST_CASE("colour literals round-trip") {
  for (auto s : {"f0", "f2", "21/32", "-3", "[[0,1],[1,0]]"}) {
    auto c = parse_colour(s);
    REQUIRE(c);
    CHECK(colour_str(*c) == s);
  }
  CHECK(*parse_colour("A0") == Colour(pauli_a0()));
  CHECK(*parse_colour("A0+A1") == Colour(pauli_a0_plus_a1()));
  CHECK(colour_alias(Colour(pauli_a1())) == "A1");
  CHECK(!parse_colour("[[1,2],[3]]"));
}

// [TRIVIAL] direct arithmetic of the op definitions
TEST_CASE("apply: pinned examples") {
  CHECK(apply(OpLabel::fox3(), Colour::fox3(0), Colour::fox3(1)) == Colour::fox3(2));
  CHECK(apply(OpLabel::linear(Rat(1, 2)), Colour(Rat(4)), Colour(Rat(2))) == Colour(Rat(3)));
  // conjugation flips the Pauli encodings of the bits: A0 ▷ (A0+A1) = A1
  CHECK(apply(OpLabel::conj_guarded(), Colour(pauli_a0()), Colour(pauli_a0_plus_a1())) ==
        Colour(pauli_a1()));
  // guarded conj by a singular agent is the identity
  CHECK(apply(OpLabel::conj_guarded(), Colour(pauli_a0()), Colour(zero2())) ==
        Colour(pauli_a0()));
  CHECK_THROWS_AS(apply(OpLabel::conj(), Colour(pauli_a0()), Colour(zero2())),
                  std::domain_error);
  CHECK_THROWS_AS(apply(OpLabel::fox3(), Colour::fox3(0), Colour(Rat(1))), KindMismatch);
}

// [DERIVED] s' = s/(s-1)
TEST_CASE("invert: linear parameter involution") {
  CHECK(invert(OpLabel::linear(Rat(2))) == OpLabel::linear(Rat(2)));
  CHECK(invert(OpLabel::linear(Rat(1, 2))) == OpLabel::linear(Rat(-1)));
  CHECK(invert(OpLabel::linear(Rat(-1))) == OpLabel::linear(Rat(1, 2)));
  CHECK(invert(OpLabel::fox3()) == OpLabel::fox3());
  CHECK(invert(invert(OpLabel::conj_guarded())) == OpLabel::conj_guarded());
}

TEST_CASE("op labels parse/print round-trip") {
  for (auto s : {"lin(1/2)", "lin(2)", "lin(-1)", "conj", "conjg", "conj_inv",
                 "conjg_inv", "fox", "bel"}) {
    auto op = parse_op(s);
    REQUIRE(op);
    CHECK(op_str(*op) == s);
  }
  CHECK(!parse_op("lin(1)"));  // s = 1 is not reversible
  CHECK(!parse_op("nope"));
}

// Property: invert is a two-sided inverse on 500 seeded samples per carrier.
TEST_CASE("reversibility property") {
  for (const auto& q : {fox3_quandle(), linear_quandle(), mixed_quagma()}) {
    auto rep = check_axioms(q, Axiom::Reversibility, {42, 500});
    CHECK(rep.pass);
  }
}

TEST_CASE("quandle axioms hold where claimed") {
  for (const auto& q : {fox3_quandle(), linear_quandle()}) {
    CHECK(check_axioms(q, Axiom::Idempotence).pass);
    CHECK(check_axioms(q, Axiom::SelfDistributivity).pass);
    CHECK(check_axioms(q, Axiom::MutualDistributivity).pass);
  }
}

TEST_CASE("mixed quagma: self-distributive but not mutually distributive") {
  auto q = mixed_quagma();
  CHECK(check_axioms(q, Axiom::Idempotence).pass);
  CHECK(check_axioms(q, Axiom::SelfDistributivity, {7, 200}).pass);
  auto rep = check_axioms(q, Axiom::MutualDistributivity, {7, 200});
  CHECK(!rep.pass);
  REQUIRE(rep.witness);
  // the failing direction is a linear op sliding across a guarded conjugation
  CHECK(rep.witness->op1.kind == OpKind::ConjGuarded);
  CHECK(rep.witness->op2.kind == OpKind::Linear);
  // witness really is a counterexample
  auto& w = *rep.witness;
  CHECK(apply(w.op2, apply(w.op1, w.x, w.y), w.z) !=
        apply(w.op1, apply(w.op2, w.x, w.z), apply(w.op2, w.y, w.z)));
}

// [DERIVED] conj distributes over linear (checked algebraically:
// V⁻¹((1-s)x+su)V = (1-s)V⁻¹xV + sV⁻¹uV), but not vice versa.
TEST_CASE("directional distributivity for R3 legality") {
  CHECK(distributes_over(OpLabel::conj_guarded(), OpLabel::linear(Rat(1, 2)),
                         CarrierKind::Matrix2, {5, 300}));
  CHECK(!distributes_over(OpLabel::linear(Rat(1, 2)), OpLabel::conj_guarded(),
                          CarrierKind::Matrix2, {5, 300}));
  CHECK(distributes_over(OpLabel::linear(Rat(2)), OpLabel::linear(Rat(1, 2)),
                         CarrierKind::Rational, {5, 300}));
  CHECK(distributes_over(OpLabel::fox3(), OpLabel::fox3(), CarrierKind::Fox3));
}

// [PAPER-VERIFIED] no-cloning defect: LHS - RHS = -(A-B)⊗(A-B)/4, nonzero iff A != B.
TEST_CASE("kron does not commute with the 1/2-average") {
  auto rng_pairs = sample_colours(CarrierKind::Matrix2, 100, 99);
  int nonzero = 0;
  for (size_t i = 0; i + 1 < rng_pairs.size(); i += 2) {
    const Mat2 &a = rng_pairs[i].m2(), &b = rng_pairs[i + 1].m2();
    Mat2 avg = a.scale(Rat(1, 2)) + b.scale(Rat(1, 2));
    Mat4 lhs = kron(avg, avg);
    Mat4 rhs = kron(a, a).scale(Rat(1, 2)) + kron(b, b).scale(Rat(1, 2));
    Mat2 d = a - b;
    Mat4 expected_defect = kron(d, d).scale(Rat(-1, 4));
    CHECK(lhs - rhs == expected_defect);
    if (a != b) {
      CHECK(!(lhs == rhs));
      ++nonzero;
    }
  }
  CHECK(nonzero > 0);
}

TEST_CASE("kron pinned block structure") {
  Mat4 k = kron(pauli_a0(), pauli_a1());
  // A0⊗A1 = [[0,A1],[A1,0]]
  Mat4 expect;
  expect.at(0, 2) = 1;
  expect.at(1, 3) = -1;
  expect.at(2, 0) = 1;
  expect.at(3, 1) = -1;
  CHECK(k == expect);
  // 4x4 inverse sanity: (A0⊗A1)^2 = I
  CHECK(inv4(k) == k);
}

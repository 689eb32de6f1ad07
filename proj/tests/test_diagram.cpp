#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tangle/colouring.hpp"
#include "tangle/diagram.hpp"

using namespace tangle;

namespace {

// one-interaction NOT gate over the mixed quagma
TangleMachine not_gate() {
  MachineBuilder b("notq", "mixed2x2");
  RegisterId x = b.input();
  RegisterId c = b.constant(Colour(pauli_a0_plus_a1()));
  RegisterId out = b.interact(c, OpLabel::conj_guarded(), x);
  b.mark_output(out);
  return b.take();
}

}  // namespace

TEST_CASE("validate rejects malformed machines") {
  TangleMachine m = not_gate();
  CHECK_NOTHROW(validate(m));

  SUBCASE("input produced") {
    m.interactions[0].patients[0].out = m.inputs[0];
    m.outputs.clear();
    CHECK_THROWS_AS(validate(m), DiagramError);
  }
  SUBCASE("in and out overlap") {
    m.outputs = {m.inputs[0]};
    CHECK_THROWS_AS(validate(m), DiagramError);
  }
  SUBCASE("unknown agent") {
    m.interactions[0].agent = 99;
    CHECK_THROWS_AS(validate(m), DiagramError);
  }
  SUBCASE("double production") {
    m.interactions.push_back(m.interactions[0]);
    CHECK_THROWS_AS(validate(m), DiagramError);
  }
  SUBCASE("double consumption") {
    MachineBuilder b("bad", "linear");
    RegisterId x = b.input();
    RegisterId g = b.constant(Colour(Rat(0)));
    b.interact(g, OpLabel::linear(Rat(2)), x);
    b.interact(g, OpLabel::linear(Rat(1, 2)), x);
    CHECK_THROWS_AS(validate(b.take()), DiagramError);
  }
}

TEST_CASE("serialize/parse round-trip is byte-stable") {
  TangleMachine m = not_gate();
  std::string s1 = serialize(m);
  TangleMachine p = parse_machine(s1);
  std::string s2 = serialize(p);
  CHECK(s1 == s2);
  CHECK(p == canonicalize(m));
  // pre-coloured constants survive the trip
  CHECK(p.constants.size() == 1);
  CHECK(p.constants.begin()->second == Colour(pauli_a0_plus_a1()));
}

TEST_CASE("parse errors carry line numbers") {
  auto expect_line = [](const std::string& text, const char* frag) {
    try {
      parse_machine(text);
      FAIL("expected DiagramError");
    } catch (const DiagramError& e) {
      CHECK(std::string(e.what()).find(frag) != std::string::npos);
    }
  };
  expect_line("machine m\nreg 0\ninter 0 nope 0->1\n", "line 3");
  expect_line("machine m\nreg zero\n", "line 2");
  expect_line("machine m\nwye mid 0 1 -> 2\n", "line 2");
}

TEST_CASE("canonicalize relabels topologically, ties by creation order") {
  // build with scrambled ids via parse
  TangleMachine m = parse_machine(
      "machine scrambled\nquagma linear\n"
      "reg 7 in\nreg 3 = 1\nreg 9 out\n"
      "inter 3 lin(2) 7->9\n");
  TangleMachine c = canonicalize(m);
  CHECK(c.registers == std::vector<RegisterId>{0, 1, 2});
  CHECK(c.inputs == std::vector<RegisterId>{0});
  CHECK(c.outputs == std::vector<RegisterId>{2});
  CHECK(c.constants.begin()->first == 1);
  // idempotent
  CHECK(canonicalize(c) == c);
}

TEST_CASE("concat splices outputs onto inputs") {
  TangleMachine n1 = not_gate(), n2 = not_gate();
  TangleMachine nn = concat(n1, n2, {{n1.outputs[0], n2.inputs[0]}});
  CHECK(nn.inputs.size() == 1);
  CHECK(nn.outputs.size() == 1);
  CHECK(nn.interactions.size() == 2);
  // double negation is the identity on the encoded bits
  auto out = evaluate_io(nn, {Colour(pauli_a0())});
  CHECK(out == std::vector<Colour>{Colour(pauli_a0())});

  CHECK_THROWS_AS(concat(n1, n2, {{99, n2.inputs[0]}}), DiagramError);
  CHECK_THROWS_AS(concat(n1, n2, {{n1.outputs[0], 99}}), DiagramError);
}

TEST_CASE("dot export is deterministic and minimal for the NOT gate") {
  std::string dot = to_dot(not_gate());
  CHECK(dot == to_dot(not_gate()));
  size_t boxes = 0, edges = 0;
  for (size_t pos = 0; (pos = dot.find("shape=box", pos)) != std::string::npos; ++pos) ++boxes;
  for (size_t pos = 0; (pos = dot.find(" -> ", pos)) != std::string::npos; ++pos) ++edges;
  CHECK(boxes == 1);
  CHECK(edges == 3);
}

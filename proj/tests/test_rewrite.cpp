#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tangle/gates.hpp"
#include "tangle/rewrite.hpp"
#include "tangle/rng.hpp"

#include <algorithm>

using namespace tangle;

namespace {

const IPParams kHalf{Rat(1), Rat(1, 2), Rat(1, 2)};

bool has_move(const std::vector<std::pair<Move, Site>>& moves, MoveKind k,
              MoveDir d) {
  return std::any_of(moves.begin(), moves.end(), [&](const auto& ms) {
    return ms.first.kind == k && ms.first.dir == d;
  });
}

std::vector<std::pair<Move, Site>> moves_of(
    const std::vector<std::pair<Move, Site>>& moves, MoveKind k, MoveDir d) {
  std::vector<std::pair<Move, Site>> out;
  for (const auto& ms : moves)
    if (ms.first.kind == k && ms.first.dir == d) out.push_back(ms);
  return out;
}

// a strand with a kink: the constant register acts on itself
TangleMachine kink_machine(bool kink_feeds_output) {
  MachineBuilder b("kink", "fox3");
  RegisterId x = b.constant(Colour::fox3(1));
  RegisterId y = b.interact(x, OpLabel::fox3(), x);  // agent x, patient x->y
  if (kink_feeds_output)
    b.mark_output(y);
  else
    b.mark_output(b.interact(b.constant(Colour::fox3(2)), OpLabel::fox3(), y));
  return b.take();
}

// worked two-verifier example, left form: X under Y, then (X, Y) under Z
TangleMachine eq_net_left() {
  MachineBuilder b("eqnet", "belief");
  RegisterId x0 = b.constant(Colour(Belief{0, 1}));
  RegisterId y0 = b.constant(Colour(Belief{Rat(1, 2), Rat(1, 2)}));
  RegisterId z0 = b.constant(Colour(Belief{1, 0}));
  RegisterId x1 = b.interact(y0, OpLabel::belief(), x0);
  RegisterId x2 = b.interact(z0, OpLabel::belief(), x1);
  RegisterId y1 = b.fresh();
  b.add_patient(1, y0, y1);
  b.mark_output(x2);
  return b.take();
}

// right form: (X, Y) under Z, then X under the updated Y
TangleMachine eq_net_right() {
  MachineBuilder b("eqnet", "belief");
  RegisterId x0 = b.constant(Colour(Belief{0, 1}));
  RegisterId y0 = b.constant(Colour(Belief{Rat(1, 2), Rat(1, 2)}));
  RegisterId z0 = b.constant(Colour(Belief{1, 0}));
  RegisterId x1 = b.interact(z0, OpLabel::belief(), x0);
  RegisterId y1 = b.fresh();
  b.add_patient(0, y0, y1);
  RegisterId x2 = b.interact(y1, OpLabel::belief(), x1);
  b.mark_output(x2);
  return b.take();
}

// the zero-knowledge example, post-slide form: the helper Z updates both
// strands at once, then X is updated under the evolved helper belief
BeliefNetwork zk_right() {
  MachineBuilder b("zk", "belief");
  RegisterId x0 = b.constant(Colour(Belief{0, 1}));
  RegisterId y0 = b.constant(Colour(Belief{1, 0}));
  RegisterId z = b.constant(Colour(Belief{Rat(1, 2), Rat(1, 2)}));
  RegisterId x1 = b.interact(z, OpLabel::belief(), x0);
  RegisterId y1 = b.fresh();
  b.add_patient(0, y0, y1);
  RegisterId x2 = b.interact(y1, OpLabel::belief(), x1);
  b.mark_output(x2);
  TangleMachine m = b.take();
  return {m, x2};
}

// simple fox3 strut with one input and a constant action, for R1/R2 surgery
TangleMachine fox_strut() {
  MachineBuilder b("strut", "fox3");
  RegisterId in = b.input();
  RegisterId g = b.constant(Colour::fox3(1));
  RegisterId mid = b.interact(g, OpLabel::fox3(), in);
  RegisterId out = b.interact(b.constant(Colour::fox3(2)), OpLabel::fox3(), mid);
  b.mark_output(out);
  return b.take();
}

// random acyclic machine generator for the soundness property
TangleMachine random_machine(const Quagma& q, uint64_t seed) {
  SplitMix rng(seed);
  MachineBuilder b("rand", q.carrier == CarrierKind::Fox3 ? "fox3" : "linear");
  std::vector<RegisterId> defined;   // carries a value, may still act as agent
  std::vector<RegisterId> strands;   // not yet consumed (strands are linear)
  auto consume = [&](size_t pick) {
    RegisterId r = strands[pick];
    strands.erase(strands.begin() + static_cast<long>(pick));
    return r;
  };
  int n_in = 1 + static_cast<int>(rng.below(2));
  for (int i = 0; i < n_in; ++i) {
    RegisterId r = b.input();
    defined.push_back(r);
    strands.push_back(r);
  }
  int n_const = 1 + static_cast<int>(rng.below(2));
  for (int i = 0; i < n_const; ++i) {
    Colour c = q.carrier == CarrierKind::Fox3
                   ? Colour::fox3(static_cast<int>(rng.below(3)))
                   : Colour(Rat(static_cast<long>(rng.range(-3, 3))));
    RegisterId r = b.constant(std::move(c));
    defined.push_back(r);
    strands.push_back(r);
  }
  int n_inter = 1 + static_cast<int>(rng.below(6));
  for (int i = 0; i < n_inter && !strands.empty(); ++i) {
    RegisterId agent = defined[rng.below(defined.size())];
    const OpLabel& op = q.ops[rng.below(q.ops.size())];
    RegisterId in = consume(rng.below(strands.size()));
    RegisterId out = b.interact(agent, op, in);
    if (rng.below(3) == 0 && !strands.empty()) {
      RegisterId in2 = consume(rng.below(strands.size()));
      RegisterId out2 = b.fresh();
      b.add_patient(b.peek().interactions.size() - 1, in2, out2);
      defined.push_back(out2);
      strands.push_back(out2);
    }
    defined.push_back(out);
    strands.push_back(out);
  }
  if (rng.below(3) == 0 && strands.size() >= 2) {
    RegisterId a = consume(rng.below(strands.size()));
    RegisterId c = consume(rng.below(strands.size()));
    RegisterId w = b.wye(rng.below(2) ? WyeMode::Max : WyeMode::Min, a, c);
    defined.push_back(w);
    strands.push_back(w);
  }
  b.mark_output(strands.back());
  return b.take();
}

}  // namespace

TEST_CASE("move catalogue names every documented move and nothing else") {
  auto names = move_catalogue();
  std::vector<std::string> expected = {
      "R1", "R2", "R3",  "QuagmaR3", "VR1", "VR2", "VR3", "SV",  "UC",
      "ST", "I1", "I2",  "I3",       "FM1", "FM2", "VYR1", "YR3", "VYR3"};
  CHECK(names == expected);
  // the agent-splitting "fake" moves are not in the catalogue: there is no
  // move that can express the void-R2 / void-R3 shapes
  for (const auto& n : names) {
    CHECK(n.find("ake") == std::string::npos);
    CHECK(n.find("oid") == std::string::npos);
  }
}

TEST_CASE("move_str and site_str are human-readable") {
  Move mv{MoveKind::QuagmaR3, MoveDir::Undo, OpLabel::linear(Rat(1, 2)),
          OpLabel::linear(Rat(2))};
  CHECK(move_str(mv) == "QuagmaR3~(lin(1/2),lin(2))");
  CHECK(site_str({}) == "-");
  CHECK(site_str({{0, 2}, {}, {5, 7}}) == "i0+i2:5,7");
}

TEST_CASE("kinked strut exposes an R1 undo site") {  // the R1 pattern
  TangleMachine m = kink_machine(false);
  Quagma q = fox3_quandle();
  auto undos = moves_of(find_moves(m, q), MoveKind::R1, MoveDir::Undo);
  REQUIRE(undos.size() == 1);
  TangleMachine r = apply_move(m, q, undos[0].first, undos[0].second);
  CHECK(r.interactions.size() == 1);  // the kink is gone
  CHECK(check_bisimilar(m, r, q));
}

TEST_CASE("a kink feeding S_out is not removable") {
  // forbidden: the move would involve an output register
  TangleMachine m = kink_machine(true);
  auto moves = find_moves(m, fox3_quandle());
  CHECK(!has_move(moves, MoveKind::R1, MoveDir::Undo));
}

TEST_CASE("R1 insert then remove returns the canonical original") {
  TangleMachine m = canonicalize(fox_strut());
  Quagma q = fox3_quandle();
  auto inserts = moves_of(find_moves(m, q), MoveKind::R1, MoveDir::Apply);
  REQUIRE(!inserts.empty());
  for (const auto& [mv, site] : inserts) {
    TangleMachine kinked = apply_move(m, q, mv, site);
    auto undos = moves_of(find_moves(kinked, q), MoveKind::R1, MoveDir::Undo);
    bool restored = false;
    for (const auto& [umv, usite] : undos)
      if (apply_move(kinked, q, umv, usite) == m) restored = true;
    CHECK(restored);
  }
}

TEST_CASE("R2 insert is reversible and preserves the I/O function") {
  TangleMachine m = canonicalize(fox_strut());
  Quagma q = fox3_quandle();
  auto inserts = moves_of(find_moves(m, q), MoveKind::R2, MoveDir::Apply);
  REQUIRE(!inserts.empty());
  for (const auto& [mv, site] : inserts) {
    TangleMachine spliced = apply_move(m, q, mv, site);
    CHECK(spliced.interactions.size() == m.interactions.size() + 2);
    CHECK(check_bisimilar(m, spliced, q));  // exhaustive over Fox-3 inputs
    auto undos = moves_of(find_moves(spliced, q), MoveKind::R2, MoveDir::Undo);
    bool restored = false;
    for (const auto& [umv, usite] : undos)
      if (apply_move(spliced, q, umv, usite) == m) restored = true;
    CHECK(restored);
  }
}

TEST_CASE("UC adds and removes an isolated uncoloured register") {
  TangleMachine m = canonicalize(fox_strut());
  Quagma q = fox3_quandle();
  Move add{MoveKind::UC, MoveDir::Apply, {}, {}};
  TangleMachine bigger = apply_move(m, q, add, {});
  CHECK(bigger.registers.size() == m.registers.size() + 1);
  auto undos = moves_of(find_moves(bigger, q), MoveKind::UC, MoveDir::Undo);
  REQUIRE(undos.size() == 1);
  CHECK(apply_move(bigger, q, undos[0].first, undos[0].second) == m);
}

TEST_CASE("cosmetic moves are the identity on the combinatorial diagram") {
  TangleMachine m = canonicalize(fox_strut());
  Quagma q = fox3_quandle();
  for (MoveKind k : {MoveKind::VR1, MoveKind::VR2, MoveKind::VR3, MoveKind::SV,
                     MoveKind::ST, MoveKind::I1, MoveKind::I2, MoveKind::I3,
                     MoveKind::FM1, MoveKind::FM2, MoveKind::VYR1,
                     MoveKind::VYR3})
    CHECK(apply_move(m, q, {k, MoveDir::Apply, {}, {}}, {}) == m);
}

TEST_CASE("the worked two-verifier example carries an R3 site") {
  // belief ops mutually distribute, so the slide is always legal for them
  TangleMachine left = eq_net_left();
  Quagma q = belief_quagma();
  auto sites = moves_of(find_moves(left, q), MoveKind::R3, MoveDir::Apply);
  REQUIRE(sites.size() == 1);
  TangleMachine slid = apply_move(left, q, sites[0].first, sites[0].second);
  CHECK(slid == canonicalize(eq_net_right()));
  CHECK(check_bisimilar(left, eq_net_right(), kHalf));
  CHECK(check_bisimilar(left, slid, kHalf));

  // and the slide is an involution: undoing it returns the left form
  auto undos = moves_of(find_moves(slid, q), MoveKind::R3, MoveDir::Undo);
  REQUIRE(undos.size() == 1);
  CHECK(apply_move(slid, q, undos[0].first, undos[0].second) ==
        canonicalize(left));
}

TEST_CASE("apply_move rejects an inapplicable site") {
  TangleMachine m = fox_strut();
  Quagma q = fox3_quandle();
  CHECK_THROWS_AS(
      apply_move(m, q, {MoveKind::R1, MoveDir::Undo, OpLabel::fox3(), {}},
                 {{0}, {}, {0, 1}}),
      RewriteError);
  CHECK_THROWS_AS(
      apply_move(m, q, {MoveKind::R3, MoveDir::Apply, {}, {}}, {{0}, {}, {0}}),
      RewriteError);
}

TEST_CASE("check_bisimilar distinguishes machines and accepts identity") {
  Quagma q = fox3_quandle();
  TangleMachine nt = build_gate(GateKind::Not, Backend::Fox3);
  TangleMachine an = build_gate(GateKind::And, Backend::Fox3);
  CHECK(check_bisimilar(nt, nt, q));
  CHECK(check_bisimilar(an, an, q));
  // different interfaces cannot carry out the same computations
  CHECK(!check_bisimilar(nt, an, q));
  // same interface, different function: NOT vs the identity strut
  MachineBuilder b("id", "fox3");
  RegisterId in = b.input();
  RegisterId out = b.interact(in, OpLabel::fox3(), in);  // x ▷ x = x
  b.mark_output(out);
  TangleMachine ident = b.take();
  CHECK(ident.inputs.size() == nt.inputs.size());
  CHECK(!check_bisimilar(nt, ident, q));
}

TEST_CASE("explore_equivalents returns only the machine itself at budget 0") {
  TangleMachine m = fox_strut();
  auto set = explore_equivalents(m, fox3_quandle(), 0, 100);
  REQUIRE(set.size() == 1);
  CHECK(set[0] == canonicalize(m));
}

TEST_CASE("exploring the ladder under R3 finds the prover-strategy variants") {
  TangleMachine m = ladder_network(4).m;
  Quagma q = belief_quagma();
  auto set = explore_equivalents(m, q, 3, 64, {MoveKind::R3, MoveKind::QuagmaR3});
  CHECK(set.size() >= 3);  // the braid admits several slides
  for (const auto& v : set) CHECK(check_bisimilar(m, v, kHalf));
  // deterministic: results come back sorted by canonical form
  for (size_t i = 1; i < set.size(); ++i)
    CHECK(serialize(set[i - 1]) < serialize(set[i]));
}

TEST_CASE("explored fox3 machines all stay bisimilar to the seed") {
  TangleMachine m = fox_strut();
  Quagma q = fox3_quandle();
  auto set = explore_equivalents(m, q, 2, 40);
  CHECK(set.size() > 1);
  for (const auto& v : set) CHECK(check_bisimilar(m, v, q));
}

TEST_CASE("engine soundness: every found move preserves the computation") {
  // 200 seeded random machines, every (move, site), exact equality
  std::vector<Quagma> quagmas = {fox3_quandle(), linear_quandle()};
  int machines = 0, applications = 0;
  for (uint64_t i = 0; i < 200; ++i) {
    const Quagma& q = quagmas[i % quagmas.size()];
    TangleMachine m = random_machine(q, substream(2026, i));
    validate(m);
    ++machines;
    for (const auto& [mv, site] : find_moves(m, q)) {
      TangleMachine r = apply_move(m, q, mv, site);
      ++applications;
      if (!check_bisimilar(m, r, q, {substream(99, i), 25})) {
        CAPTURE(move_str(mv));
        CAPTURE(site_str(site));
        CAPTURE(serialize(m));
        REQUIRE(false);
      }
    }
  }
  CHECK(machines == 200);
  CHECK(applications > 1000);  // the catalogue actually fires
}

TEST_CASE("zero-knowledge example verdicts") {
  // deformation with completeness parameter d and soundness d/2
  auto run = [](const Rat& d) {
    BeliefNetwork net = zk_right();
    IPParams p{Rat(1), Rat(1, 2), d};
    return is_zero_knowledge(net, p, Rat(1), 32, 2);
  };
  SUBCASE("d = 3/4: intermediate hides, equivalent form reveals -> zk") {
    auto v = run(Rat(3, 4));
    CHECK(v.kind == ZkVerdict::Kind::Zk);
  }
  SUBCASE("d = 2/5: terminal belief fails to decide -> not_deciding") {
    auto v = run(Rat(2, 5));
    CHECK(v.kind == ZkVerdict::Kind::NotDeciding);
  }
  SUBCASE("a braid whose intermediate already decides -> not_zk") {
    // the pre-slide form of the example leaks the decision at X-bar
    MachineBuilder b("leaky", "belief");
    RegisterId x0 = b.constant(Colour(Belief{0, 1}));
    RegisterId y0 = b.constant(Colour(Belief{1, 0}));
    RegisterId z = b.constant(Colour(Belief{Rat(1, 2), Rat(1, 2)}));
    RegisterId xb = b.interact(y0, OpLabel::belief(), x0);
    RegisterId x2 = b.interact(z, OpLabel::belief(), xb);
    RegisterId y1 = b.fresh();
    b.add_patient(1, y0, y1);
    b.mark_output(x2);
    BeliefNetwork net{b.take(), x2};
    IPParams p{Rat(1), Rat(1, 2), Rat(3, 4)};
    auto v = is_zero_knowledge(net, p, Rat(1), 32, 2);
    CHECK(v.kind == ZkVerdict::Kind::NotZk);
    CHECK(v.reason.find("intermediate") != std::string::npos);
  }
  SUBCASE("the braided ladder is zero-knowledge: no intermediate leaks, but an"
          " equivalent prover strategy plays the True agent early") {
    BeliefNetwork net = ladder_network(4);
    auto v = is_zero_knowledge(net, kHalf, Rat(1), 32, 2);
    CHECK(v.kind == ZkVerdict::Kind::Zk);
  }
}

TEST_CASE("zero-knowledge example beliefs match the worked figures") {
  // with d = 3/4 the post-slide intermediate is (3/8)-True and fails to
  // decide, while the pre-slide form of the same machine decides at X-bar
  BeliefNetwork net = zk_right();
  IPParams p{Rat(1), Rat(1, 2), Rat(3, 4)};
  auto bel = propagate_network(net, p);
  // X1 = X0 updated under the half-half helper: True-coeff d/2
  bool found_hidden = false;
  for (const auto& [r, bl] : bel)
    if (bl.a == Rat(3, 8)) found_hidden = true;
  CHECK(found_hidden);
  // terminal X2 decides at kappa=1, word_len=32
  CHECK(bel.at(net.deciding).a == Rat(9, 16));
  CHECK(bel.at(net.deciding).b == Rat(37, 64));
  CHECK(decides(bel.at(net.deciding), Rat(1), 32));

  // the R3-undone machine exposes the deciding intermediate X-bar = 3/4 True
  Quagma q = belief_quagma();
  auto undos = moves_of(find_moves(canonicalize(net.m), q), MoveKind::R3,
                        MoveDir::Undo);
  REQUIRE(undos.size() == 1);
  TangleMachine pre =
      apply_move(canonicalize(net.m), q, undos[0].first, undos[0].second);
  auto bel2 = propagate_network({pre, 0}, p);
  bool found_revealed = false;
  for (const auto& [r, bl] : bel2)
    if (bl.a == Rat(3, 4) && bl.b == Rat(5, 8)) found_revealed = true;
  CHECK(found_revealed);
}

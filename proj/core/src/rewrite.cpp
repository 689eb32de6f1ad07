#include "tangle/rewrite.hpp"

#include "tangle/rng.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

namespace tangle {

namespace {

const char* kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::R1: return "R1";
    case MoveKind::R2: return "R2";
    case MoveKind::R3: return "R3";
    case MoveKind::QuagmaR3: return "QuagmaR3";
    case MoveKind::VR1: return "VR1";
    case MoveKind::VR2: return "VR2";
    case MoveKind::VR3: return "VR3";
    case MoveKind::SV: return "SV";
    case MoveKind::UC: return "UC";
    case MoveKind::ST: return "ST";
    case MoveKind::I1: return "I1";
    case MoveKind::I2: return "I2";
    case MoveKind::I3: return "I3";
    case MoveKind::FM1: return "FM1";
    case MoveKind::FM2: return "FM2";
    case MoveKind::VYR1: return "VYR1";
    case MoveKind::YR3: return "YR3";
    case MoveKind::VYR3: return "VYR3";
  }
  return "?";
}

constexpr MoveKind kCosmetic[] = {MoveKind::VR1, MoveKind::VR2, MoveKind::VR3,
                                  MoveKind::SV,  MoveKind::ST,  MoveKind::I1,
                                  MoveKind::I2,  MoveKind::I3,  MoveKind::FM1,
                                  MoveKind::FM2, MoveKind::VYR1, MoveKind::VYR3};

bool is_cosmetic(MoveKind k) {
  return std::find(std::begin(kCosmetic), std::end(kCosmetic), k) !=
         std::end(kCosmetic);
}

bool is_io(const TangleMachine& m, RegisterId r) {
  return std::find(m.inputs.begin(), m.inputs.end(), r) != m.inputs.end() ||
         std::find(m.outputs.begin(), m.outputs.end(), r) != m.outputs.end();
}

bool used_as_agent(const TangleMachine& m, RegisterId r) {
  for (const auto& it : m.interactions)
    if (it.agent == r) return true;
  return false;
}

bool used_in_wye(const TangleMachine& m, RegisterId r) {
  for (const auto& w : m.wyes)
    if (w.in1 == r || w.in2 == r) return true;
  return false;
}

size_t patient_in_count(const TangleMachine& m, RegisterId r) {
  size_t n = 0;
  for (const auto& it : m.interactions)
    for (const auto& pp : it.patients)
      if (pp.in == r) ++n;
  return n;
}

// a register carries a value iff it is pinned, an input, or produced
bool defined_reg(const TangleMachine& m, RegisterId r) {
  if (m.constants.count(r)) return true;
  if (std::find(m.inputs.begin(), m.inputs.end(), r) != m.inputs.end())
    return true;
  for (const auto& it : m.interactions)
    for (const auto& pp : it.patients)
      if (pp.out == r) return true;
  for (const auto& w : m.wyes)
    if (w.out == r) return true;
  return false;
}

// replaces every consumer-side reference (patient in, wye in, agent) of a by b
void rewire(TangleMachine& m, RegisterId a, RegisterId b) {
  for (auto& it : m.interactions) {
    if (it.agent == a) it.agent = b;
    for (auto& pp : it.patients)
      if (pp.in == a) pp.in = b;
  }
  for (auto& w : m.wyes) {
    if (w.in1 == a) w.in1 = b;
    if (w.in2 == a) w.in2 = b;
  }
}

void drop_register(TangleMachine& m, RegisterId r) {
  m.registers.erase(std::find(m.registers.begin(), m.registers.end(), r));
  m.constants.erase(r);
  m.labels.erase(r);
}

RegisterId fresh_id(const TangleMachine& m) {
  RegisterId n = 0;
  for (RegisterId r : m.registers) n = std::max(n, r + 1);
  return n;
}

// R3 legality for an (inner a, outer b) op pair: the slide is sound exactly
// when (x op_a u) op_b v == (x op_b v) op_a (u op_b v).
bool r3_legal(const OpLabel& a, const OpLabel& b, const Quagma& q) {
  if (a.kind == OpKind::Belief || b.kind == OpKind::Belief)
    return a.kind == b.kind;  // belief updates mutually distribute
  return distributes_over(b, a, q.carrier, {1, 60});
}

// op is safe to insert with agent colour c (if pinned): conjugation by a
// singular agent is undefined unless guarded.
bool insertable(const OpLabel& op, const TangleMachine& m, RegisterId agent) {
  if (op.kind == OpKind::Belief) return false;  // beliefs are not reversible
  auto it = m.constants.find(agent);
  if (it == m.constants.end()) return false;  // R2 needs defined colours
  const Colour& c = it->second;
  switch (op.kind) {
    case OpKind::Conj:
    case OpKind::ConjInv:
      if (c.kind() == Colour::Kind::Mat2) return det2(c.m2()) != 0;
      if (c.kind() == Colour::Kind::Mat4) return det4(c.m4()) != 0;
      return false;
    case OpKind::ConjGuarded:
    case OpKind::ConjGuardedInv:
      return c.kind() == Colour::Kind::Mat2 || c.kind() == Colour::Kind::Mat4;
    case OpKind::Linear:
      return c.kind() == Colour::Kind::Rational ||
             c.kind() == Colour::Kind::Mat2 || c.kind() == Colour::Kind::Mat4;
    case OpKind::Fox3:
      return c.kind() == Colour::Kind::Fox3;
    default:
      return false;
  }
}

std::vector<std::vector<Colour>> sample_input_tuples(const TangleMachine& m,
                                                     const Quagma& q,
                                                     SampleBudget budget) {
  size_t n = m.inputs.size();
  std::vector<std::vector<Colour>> tuples;
  if (q.carrier == CarrierKind::Fox3 && n <= 6) {
    size_t total = 1;
    for (size_t i = 0; i < n; ++i) total *= 3;
    for (size_t code = 0; code < total; ++code) {
      std::vector<Colour> t;
      size_t c = code;
      for (size_t i = 0; i < n; ++i) {
        t.push_back(Colour::fox3(static_cast<int>(c % 3)));
        c /= 3;
      }
      tuples.push_back(std::move(t));
    }
    return tuples;
  }
  auto pool = sample_colours(q.carrier, static_cast<int>(n) * budget.samples,
                             budget.seed, true);
  for (long i = 0; i < budget.samples; ++i) {
    std::vector<Colour> t(pool.begin() + i * static_cast<long>(n),
                          pool.begin() + (i + 1) * static_cast<long>(n));
    tuples.push_back(std::move(t));
  }
  if (n == 0) tuples.assign(1, {});
  return tuples;
}

// outcome of one computation: outputs, or "failed"
std::pair<bool, std::vector<Colour>> run_io(const TangleMachine& m,
                                            const std::vector<Colour>& in) {
  try {
    return {true, evaluate_io(m, in)};
  } catch (const std::exception&) {
    return {false, {}};
  }
}

}  // namespace

std::string move_str(const Move& mv) {
  std::string s = kind_name(mv.kind);
  if (mv.dir == MoveDir::Undo) s += "~";
  if (mv.kind == MoveKind::R1 || mv.kind == MoveKind::R2)
    s += "(" + op_str(mv.op1) + ")";
  if (mv.kind == MoveKind::QuagmaR3)
    s += "(" + op_str(mv.op1) + "," + op_str(mv.op2) + ")";
  return s;
}

std::string site_str(const Site& s) {
  if (s.inters.empty() && s.wye_idx.empty() && s.regs.empty()) return "-";
  std::string out;
  for (size_t i : s.inters) out += (out.empty() ? "i" : "+i") + std::to_string(i);
  for (size_t w : s.wye_idx) out += (out.empty() ? "w" : "+w") + std::to_string(w);
  if (!s.regs.empty()) {
    out += ":";
    for (size_t k = 0; k < s.regs.size(); ++k)
      out += (k ? "," : "") + std::to_string(s.regs[k]);
  }
  return out;
}

std::vector<std::string> move_catalogue() {
  std::vector<std::string> names;
  for (int k = 0; k <= static_cast<int>(MoveKind::VYR3); ++k)
    names.push_back(kind_name(static_cast<MoveKind>(k)));
  return names;
}

namespace {

// A YR3 candidate: wye then interaction <-> interactions then wye (possibly
// flipping the wye label). Returns the rewritten machine or nullopt if no
// label choice preserves the computation.
std::optional<TangleMachine> try_yr3(const TangleMachine& m, const Quagma& q,
                                     const Move& mv, const Site& site);

}  // namespace

std::vector<std::pair<Move, Site>> find_moves(const TangleMachine& m,
                                              const Quagma& q) {
  std::vector<std::pair<Move, Site>> out;

  // cosmetic moves: always applicable, identity on the combinatorial IR
  for (MoveKind k : kCosmetic) out.push_back({{k, MoveDir::Apply, {}, {}}, {}});

  // UC: add an isolated register / remove one
  out.push_back({{MoveKind::UC, MoveDir::Apply, {}, {}}, {}});
  for (RegisterId r : m.registers) {
    if (is_io(m, r) || m.constants.count(r) || used_as_agent(m, r) ||
        used_in_wye(m, r))
      continue;
    bool touched = false;
    for (const auto& it : m.interactions)
      for (const auto& pp : it.patients)
        if (pp.in == r || pp.out == r) touched = true;
    for (const auto& w : m.wyes)
      if (w.out == r) touched = true;
    if (!touched) out.push_back({{MoveKind::UC, MoveDir::Undo, {}, {}}, {{}, {}, {r}}});
  }

  // R1 apply: kink any defined non-I/O register with any quagma op
  for (RegisterId r : m.registers) {
    if (is_io(m, r) || !defined_reg(m, r)) continue;
    for (const auto& op : q.ops)
      out.push_back({{MoveKind::R1, MoveDir::Apply, op, {}}, {{}, {}, {r}}});
  }
  // R1 undo: single-patient interaction whose agent is its own patient
  for (size_t i = 0; i < m.interactions.size(); ++i) {
    const auto& it = m.interactions[i];
    if (it.patients.size() != 1 || it.agent != it.patients[0].in) continue;
    RegisterId y = it.patients[0].out;
    if (is_io(m, y)) continue;
    out.push_back({{MoveKind::R1, MoveDir::Undo, it.op, {}},
                   {{i}, {}, {it.patients[0].in, y}}});
  }

  // R2 apply: splice (x op g, then inverse) onto strand x under a pinned agent
  for (RegisterId x : m.registers) {
    if (is_io(m, x) || !defined_reg(m, x)) continue;
    for (const auto& kv : m.constants)
      for (const auto& op : q.ops)
        if (insertable(op, m, kv.first))
          out.push_back(
              {{MoveKind::R2, MoveDir::Apply, op, {}}, {{}, {}, {x, kv.first}}});
  }
  // R2 undo: cancel (x op g -> y) followed by (y inv-op g -> z)
  for (size_t i = 0; i < m.interactions.size(); ++i) {
    for (size_t j = 0; j < m.interactions.size(); ++j) {
      if (i == j) continue;
      const auto &a = m.interactions[i], &b = m.interactions[j];
      if (a.agent != b.agent) continue;  // the single agent cannot be split
      if (a.op.kind == OpKind::Belief || b.op.kind == OpKind::Belief) continue;
      if (!(invert(a.op) == b.op)) continue;
      for (const auto& pa : a.patients)
        for (const auto& pb : b.patients) {
          if (pa.out != pb.in) continue;
          RegisterId y = pa.out, z = pb.out;
          if (is_io(m, y) || is_io(m, z)) continue;
          if (used_as_agent(m, y) || used_in_wye(m, y)) continue;
          if (patient_in_count(m, y) != 1) continue;  // y must cancel cleanly
          out.push_back({{MoveKind::R2, MoveDir::Undo, a.op, {}},
                         {{i, j}, {}, {pa.in, y, z}}});
        }
    }
  }

  // R3 / QuagmaR3
  auto push_r3 = [&](const OpLabel& inner, const OpLabel& outer, MoveDir dir,
                     Site site) {
    if (!r3_legal(inner, outer, q)) return;
    if (inner == outer)
      out.push_back({{MoveKind::R3, dir, {}, {}}, std::move(site)});
    else
      out.push_back({{MoveKind::QuagmaR3, dir, inner, outer}, std::move(site)});
  };
  for (size_t i = 0; i < m.interactions.size(); ++i) {
    for (size_t j = 0; j < m.interactions.size(); ++j) {
      if (i == j) continue;
      const auto &a = m.interactions[i], &b = m.interactions[j];
      // apply: a = (x -> y under u), b carries (y -> z) and (u -> u')
      for (const auto& pa : a.patients) {
        RegisterId y = pa.out;
        if (is_io(m, y) || used_as_agent(m, y) || used_in_wye(m, y)) continue;
        if (patient_in_count(m, y) != 1) continue;  // y's value changes
        bool has_y = false, has_u = false;
        for (const auto& pb : b.patients) {
          if (pb.in == y) has_y = true;
          if (pb.in == a.agent) has_u = true;
        }
        if (has_y && has_u)
          push_r3(a.op, b.op, MoveDir::Apply, {{i, j}, {}, {pa.in, y}});
      }
      // undo: b carries (x -> y) and (u -> u'); a = (y -> z under u')
      for (const auto& pb : b.patients) {
        RegisterId y = pb.out;
        if (is_io(m, y) || used_as_agent(m, y) || used_in_wye(m, y)) continue;
        if (patient_in_count(m, y) != 1) continue;  // y's value changes
        bool a_consumes_y = false;
        for (const auto& pa : a.patients)
          if (pa.in == y) a_consumes_y = true;
        if (!a_consumes_y) continue;
        for (const auto& pu : b.patients)
          if (pu.out == a.agent && pu.in != pb.in)
            push_r3(a.op, b.op, MoveDir::Undo, {{i, j}, {}, {pb.in, y, pu.in}});
      }
    }
  }

  // YR3: wye output sliding through an interaction (guarded both ways)
  for (size_t w = 0; w < m.wyes.size(); ++w) {
    RegisterId c = m.wyes[w].out;
    if (is_io(m, c) || used_as_agent(m, c)) continue;
    for (size_t i = 0; i < m.interactions.size(); ++i)
      for (const auto& pp : m.interactions[i].patients)
        if (pp.in == c) {
          Move mv{MoveKind::YR3, MoveDir::Apply, m.interactions[i].op, {}};
          Site site{{i}, {w}, {c, pp.out}};
          if (try_yr3(m, q, mv, site)) out.push_back({mv, site});
        }
  }
  // YR3 undo: two single-patient interactions, same agent and op, feeding
  // a wye
  for (size_t w = 0; w < m.wyes.size(); ++w) {
    const auto& wy = m.wyes[w];
    for (size_t i = 0; i < m.interactions.size(); ++i)
      for (size_t j = 0; j < m.interactions.size(); ++j) {
        if (i == j) continue;
        const auto &a = m.interactions[i], &b = m.interactions[j];
        if (a.agent != b.agent || !(a.op == b.op)) continue;
        if (a.patients.size() != 1 || b.patients.size() != 1) continue;
        if (a.patients[0].out != wy.in1 || b.patients[0].out != wy.in2) continue;
        RegisterId p = wy.in1, r = wy.in2;
        if (is_io(m, p) || is_io(m, r) || used_as_agent(m, p) ||
            used_as_agent(m, r))
          continue;
        Move mv{MoveKind::YR3, MoveDir::Undo, a.op, {}};
        Site site{{i, j}, {w}, {p, r}};
        if (try_yr3(m, q, mv, site)) out.push_back({mv, site});
      }
  }

  return out;
}

namespace {

TangleMachine surgery(const TangleMachine& m0, const Quagma& q, const Move& mv,
                      const Site& site) {
  TangleMachine m = m0;
  auto bad = [&](const std::string& why) {
    return RewriteError(move_str(mv) + " at " + site_str(site) + ": " + why);
  };

  if (is_cosmetic(mv.kind)) return m;

  switch (mv.kind) {
    case MoveKind::UC: {
      if (mv.dir == MoveDir::Apply) {
        m.registers.push_back(fresh_id(m));
        return m;
      }
      if (site.regs.size() != 1) throw bad("expected one register");
      RegisterId r = site.regs[0];
      if (is_io(m, r) || m.constants.count(r)) throw bad("register not isolated");
      for (const auto& it : m.interactions) {
        if (it.agent == r) throw bad("register not isolated");
        for (const auto& pp : it.patients)
          if (pp.in == r || pp.out == r) throw bad("register not isolated");
      }
      drop_register(m, r);
      return m;
    }

    case MoveKind::R1: {
      if (mv.dir == MoveDir::Apply) {
        if (site.regs.size() != 1) throw bad("expected one register");
        RegisterId r = site.regs[0];
        if (is_io(m, r)) throw bad("site touches S_in/S_out");
        if (!defined_reg(m, r)) throw bad("register carries no value");
        RegisterId y = fresh_id(m);
        m.registers.push_back(y);
        // splice the kink into r's continuation first
        for (auto& it : m.interactions)
          for (auto& pp : it.patients)
            if (pp.in == r) pp.in = y;
        for (auto& w : m.wyes) {
          if (w.in1 == r) w.in1 = y;
          if (w.in2 == r) w.in2 = y;
        }
        m.interactions.push_back({r, mv.op1, {{r, y}}});
        return m;
      }
      if (site.inters.size() != 1 || site.regs.size() != 2)
        throw bad("expected one interaction and two registers");
      const auto& it = m.interactions.at(site.inters[0]);
      RegisterId x = site.regs[0], y = site.regs[1];
      if (it.patients.size() != 1 || it.agent != x || it.patients[0].in != x ||
          it.patients[0].out != y)
        throw bad("not a kink");
      if (is_io(m, y)) throw bad("site touches S_in/S_out");
      m.interactions.erase(m.interactions.begin() +
                           static_cast<long>(site.inters[0]));
      rewire(m, y, x);
      drop_register(m, y);
      return m;
    }

    case MoveKind::R2: {
      if (mv.dir == MoveDir::Apply) {
        if (site.regs.size() != 2) throw bad("expected strand and agent");
        RegisterId x = site.regs[0], g = site.regs[1];
        if (is_io(m, x)) throw bad("site touches S_in/S_out");
        if (!defined_reg(m, x)) throw bad("register carries no value");
        if (!insertable(mv.op1, m, g)) throw bad("agent colour undefined");
        RegisterId y = fresh_id(m);
        RegisterId z = y + 1;
        m.registers.push_back(y);
        m.registers.push_back(z);
        for (auto& it : m.interactions)
          for (auto& pp : it.patients)
            if (pp.in == x) pp.in = z;
        for (auto& w : m.wyes) {
          if (w.in1 == x) w.in1 = z;
          if (w.in2 == x) w.in2 = z;
        }
        m.interactions.push_back({g, mv.op1, {{x, y}}});
        m.interactions.push_back({g, invert(mv.op1), {{y, z}}});
        return m;
      }
      if (site.inters.size() != 2 || site.regs.size() != 3)
        throw bad("expected two interactions and three registers");
      RegisterId x = site.regs[0], y = site.regs[1], z = site.regs[2];
      if (is_io(m, y) || is_io(m, z)) throw bad("site touches S_in/S_out");
      auto &a = m.interactions.at(site.inters[0]),
           &b = m.interactions.at(site.inters[1]);
      if (a.agent != b.agent || !(invert(a.op) == b.op))
        throw bad("ops do not cancel");
      auto take_pair = [&](Interaction& it, RegisterId in, RegisterId outr) {
        for (size_t k = 0; k < it.patients.size(); ++k)
          if (it.patients[k].in == in && it.patients[k].out == outr) {
            it.patients.erase(it.patients.begin() + static_cast<long>(k));
            return true;
          }
        return false;
      };
      if (!take_pair(a, x, y) || !take_pair(b, y, z)) throw bad("pairs missing");
      rewire(m, z, x);
      // erase the later interaction first so indices stay valid
      for (size_t idx : {std::max(site.inters[0], site.inters[1]),
                         std::min(site.inters[0], site.inters[1])}) {
        if (m.interactions[idx].patients.empty())
          m.interactions.erase(m.interactions.begin() + static_cast<long>(idx));
      }
      drop_register(m, y);
      drop_register(m, z);
      return m;
    }

    case MoveKind::R3:
    case MoveKind::QuagmaR3: {
      if (site.inters.size() != 2 || site.regs.size() < 2)
        throw bad("expected two interactions");
      {
        const auto &a = m.interactions.at(site.inters[0]),
                   &b = m.interactions.at(site.inters[1]);
        if (!r3_legal(a.op, b.op, q)) throw bad("ops not mutually distributive");
      }
      RegisterId x = site.regs[0], y = site.regs[1];
      if (is_io(m, y) || used_as_agent(m, y) || used_in_wye(m, y) ||
          patient_in_count(m, y) != 1)
        throw bad("intermediate register is not free");
      if (mv.dir == MoveDir::Apply) {
        auto &a = m.interactions[site.inters[0]], &b = m.interactions[site.inters[1]];
        // a: (x -> y) under u;  b: (y -> z), (u -> u') under v
        RegisterId u = a.agent;
        OpLabel inner = a.op;
        RegisterId z = 0, uprime = 0;
        bool found_z = false, found_u = false;
        for (auto& pb : b.patients) {
          if (pb.in == y) {
            z = pb.out;
            found_z = true;
          }
          if (pb.in == u) {
            uprime = pb.out;
            found_u = true;
          }
        }
        if (!found_z || !found_u) throw bad("pattern does not match");
        // remove (x -> y) from a
        auto& pa = a.patients;
        auto ita = std::find_if(pa.begin(), pa.end(), [&](const PatientPair& p) {
          return p.in == x && p.out == y;
        });
        if (ita == pa.end()) throw bad("pattern does not match");
        pa.erase(ita);
        // b: (y -> z) becomes (x -> y)
        for (auto& pb : b.patients)
          if (pb.in == y && pb.out == z) {
            pb.in = x;
            pb.out = y;
          }
        bool a_empty = pa.empty();
        if (a_empty)
          m.interactions.erase(m.interactions.begin() +
                               static_cast<long>(site.inters[0]));
        // new interaction: y -> z under u'
        m.interactions.push_back({uprime, inner, {{y, z}}});
        return m;
      }
      // undo: a = (y -> z) under u' with u' produced by b; b carries (x -> y)
      // and (u -> u')
      if (site.regs.size() != 3) throw bad("expected three registers");
      {
        auto &a = m.interactions[site.inters[0]], &b = m.interactions[site.inters[1]];
        RegisterId u = site.regs[2];
        RegisterId uprime = a.agent;
        OpLabel inner = a.op;
        RegisterId z = 0;
        bool found = false;
        for (auto& pa : a.patients)
          if (pa.in == y) {
            z = pa.out;
            found = true;
          }
        if (!found) throw bad("pattern does not match");
        bool produces = false;
        for (auto& pb : b.patients)
          if (pb.in == u && pb.out == uprime) produces = true;
        if (!produces) throw bad("pattern does not match");
        // remove (y -> z) from a
        auto& pa = a.patients;
        auto ita = std::find_if(pa.begin(), pa.end(), [&](const PatientPair& p) {
          return p.in == y && p.out == z;
        });
        pa.erase(ita);
        // b: (x -> y) becomes (y -> z)
        for (auto& pb : b.patients)
          if (pb.in == x && pb.out == y) {
            pb.in = y;
            pb.out = z;
          }
        bool a_empty = pa.empty();
        if (a_empty)
          m.interactions.erase(m.interactions.begin() +
                               static_cast<long>(site.inters[0]));
        m.interactions.push_back({u, inner, {{x, y}}});
        return m;
      }
    }

    case MoveKind::YR3: {
      auto res = try_yr3(m0, q, mv, site);
      if (!res) throw bad("no wye label preserves the computation");
      return *res;
    }

    default:
      throw bad("unknown move");
  }
}

std::optional<TangleMachine> try_yr3(const TangleMachine& m, const Quagma& q,
                                     const Move& mv, const Site& site) {
  if (site.wye_idx.size() != 1) return std::nullopt;
  size_t wi = site.wye_idx[0];
  if (wi >= m.wyes.size()) return std::nullopt;

  auto build = [&](bool flip) -> std::optional<TangleMachine> {
    TangleMachine r = m;
    Wye& w = r.wyes[wi];
    if (mv.dir == MoveDir::Apply) {
      // wye(a,b)->c then (c->d under g)  ==>  (a->a', b->b' under g) then
      // wye(a',b')->d
      if (site.inters.size() != 1 || site.regs.size() != 2) return std::nullopt;
      auto& it = r.interactions.at(site.inters[0]);
      RegisterId c = site.regs[0], d = site.regs[1];
      if (w.out != c) return std::nullopt;
      auto pp = std::find_if(it.patients.begin(), it.patients.end(),
                             [&](const PatientPair& p) {
                               return p.in == c && p.out == d;
                             });
      if (pp == it.patients.end()) return std::nullopt;
      if (used_as_agent(r, c) || used_in_wye(r, c)) return std::nullopt;
      RegisterId a1 = fresh_id(r), b1 = a1 + 1;
      r.registers.push_back(a1);
      r.registers.push_back(b1);
      it.patients.erase(pp);
      RegisterId agent = it.agent;
      OpLabel op = it.op;
      if (it.patients.empty())
        r.interactions.erase(r.interactions.begin() +
                             static_cast<long>(site.inters[0]));
      r.interactions.push_back({agent, op, {{w.in1, a1}}});
      r.interactions.push_back({agent, op, {{w.in2, b1}}});
      Wye& w2 = r.wyes[wi];
      w2.in1 = a1;
      w2.in2 = b1;
      w2.out = d;
      drop_register(r, c);
      if (flip) w2.mode = w2.mode == WyeMode::Max ? WyeMode::Min : WyeMode::Max;
      return r;
    }
    // undo: (a->a', b->b' under g) then wye(a',b')->d  ==>  wye(a,b)->c then
    // (c->d under g)
    if (site.inters.size() != 2 || site.regs.size() != 2) return std::nullopt;
    auto &ia = r.interactions[site.inters[0]], &ib = r.interactions[site.inters[1]];
    if (ia.agent != ib.agent || !(ia.op == ib.op)) return std::nullopt;
    if (ia.patients.size() != 1 || ib.patients.size() != 1) return std::nullopt;
    RegisterId a_in = ia.patients[0].in, a_out = ia.patients[0].out;
    RegisterId b_in = ib.patients[0].in, b_out = ib.patients[0].out;
    if (w.in1 != a_out || w.in2 != b_out) return std::nullopt;
    RegisterId c = fresh_id(r);
    r.registers.push_back(c);
    RegisterId agent = ia.agent;
    OpLabel op = ia.op;
    RegisterId d = w.out;
    for (size_t idx : {std::max(site.inters[0], site.inters[1]),
                       std::min(site.inters[0], site.inters[1])})
      r.interactions.erase(r.interactions.begin() + static_cast<long>(idx));
    Wye& w2 = r.wyes[wi];
    w2.in1 = a_in;
    w2.in2 = b_in;
    w2.out = c;
    r.interactions.push_back({agent, op, {{c, d}}});
    drop_register(r, a_out);
    drop_register(r, b_out);
    if (flip) w2.mode = w2.mode == WyeMode::Max ? WyeMode::Min : WyeMode::Max;
    return r;
  };

  for (bool flip : {false, true}) {
    auto cand = build(flip);
    if (!cand) continue;
    try {
      validate(*cand);
      if (check_bisimilar(m, *cand, q, {1, 40})) return canonicalize(*cand);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

}  // namespace

TangleMachine apply_move(const TangleMachine& m, const Quagma& q, const Move& mv,
                         const Site& site) {
  if (mv.kind == MoveKind::YR3) {
    auto r = try_yr3(m, q, mv, site);
    if (!r)
      throw RewriteError(move_str(mv) + " at " + site_str(site) +
                         ": no wye label preserves the computation");
    return *r;
  }
  TangleMachine r = surgery(m, q, mv, site);
  validate(r);
  return canonicalize(r);
}

bool check_bisimilar(const TangleMachine& m1, const TangleMachine& m2,
                     const Quagma& q, SampleBudget budget) {
  if (m1.inputs.size() != m2.inputs.size() ||
      m1.outputs.size() != m2.outputs.size())
    return false;
  for (const auto& in : sample_input_tuples(m1, q, budget)) {
    auto r1 = run_io(m1, in);
    auto r2 = run_io(m2, in);
    if (r1 != r2) return false;
  }
  return true;
}

bool check_bisimilar(const TangleMachine& m1, const TangleMachine& m2,
                     const IPParams& p) {
  if (m1.inputs.size() != m2.inputs.size() ||
      m1.outputs.size() != m2.outputs.size())
    return false;
  auto o1 = propagate_network({m1, 0}, p);
  auto o2 = propagate_network({m2, 0}, p);
  for (size_t i = 0; i < m1.outputs.size(); ++i)
    if (!(o1.at(m1.outputs[i]) == o2.at(m2.outputs[i]))) return false;
  return true;
}

std::vector<TangleMachine> explore_equivalents(const TangleMachine& m,
                                               const Quagma& q, int max_moves,
                                               size_t max_machines,
                                               const std::set<MoveKind>& kinds) {
  if (max_machines == 0) max_machines = 1;
  TangleMachine start = canonicalize(m);
  std::map<std::string, TangleMachine> seen;
  seen.emplace(serialize(start), start);
  std::deque<std::pair<TangleMachine, int>> queue{{start, 0}};
  while (!queue.empty() && seen.size() < max_machines) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth >= max_moves) continue;
    for (const auto& [mv, site] : find_moves(cur, q)) {
      if (!kinds.empty() && !kinds.count(mv.kind)) continue;
      TangleMachine next = apply_move(cur, q, mv, site);
      auto key = serialize(next);
      if (seen.count(key)) continue;
      seen.emplace(key, next);
      queue.push_back({std::move(next), depth + 1});
      if (seen.size() >= max_machines) break;
    }
  }
  std::vector<TangleMachine> out;
  out.reserve(seen.size());
  for (auto& [key, mm] : seen) out.push_back(std::move(mm));
  return out;
}

Quagma belief_quagma() {
  return {"belief", CarrierKind::Rational, {OpLabel::belief()}, StructureClass::Quagma};
}

namespace {

std::vector<RegisterId> intermediate_registers(const TangleMachine& m) {
  std::set<RegisterId> produced, consumed;
  for (const auto& it : m.interactions)
    for (const auto& pp : it.patients) {
      produced.insert(pp.out);
      consumed.insert(pp.in);
    }
  std::vector<RegisterId> out;
  for (RegisterId r : m.registers)
    if (produced.count(r) && consumed.count(r)) out.push_back(r);
  return out;
}

}  // namespace

ZkVerdict is_zero_knowledge(const BeliefNetwork& net, const IPParams& p,
                            const Rat& kappa, unsigned word_len, int budget) {
  auto beliefs = propagate_network(net, p);
  if (!decides(beliefs.at(net.deciding), kappa, word_len))
    return {ZkVerdict::Kind::NotDeciding, "terminal register does not decide"};

  for (RegisterId r : intermediate_registers(net.m))
    if (decides(beliefs.at(r), kappa, word_len))
      return {ZkVerdict::Kind::NotZk,
              "intermediate register " + std::to_string(r) + " decides"};

  Quagma q = belief_quagma();
  TangleMachine start = canonicalize(net.m);
  auto variants = explore_equivalents(start, q, budget, 200,
                                      {MoveKind::R3, MoveKind::QuagmaR3});
  std::string start_key = serialize(start);
  for (const auto& v : variants) {
    if (serialize(v) == start_key) continue;
    auto vb = propagate_network({v, 0}, p);
    for (RegisterId r : intermediate_registers(v))
      if (decides(vb.at(r), kappa, word_len)) return {ZkVerdict::Kind::Zk, ""};
  }
  return {ZkVerdict::Kind::NotZk,
          "no equivalent machine exposes a deciding intermediate within budget"};
}

}  // namespace tangle

#include "tangle/turing.hpp"

#include <set>
#include <sstream>

namespace tangle {

namespace {

[[noreturn]] void terr(int lineno, const std::string& msg) {
  throw TuringError("line " + std::to_string(lineno) + ": " + msg);
}

int parse_int(const std::string& t, int lineno) {
  try {
    size_t pos = 0;
    int v = std::stoi(t, &pos);
    if (pos != t.size()) terr(lineno, "bad number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    terr(lineno, "bad number '" + t + "'");
  }
}

}  // namespace

TMSpec parse_tm(const std::string& text) {
  TMSpec spec;
  bool saw_states = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "states") {
      if (toks.size() != 4) terr(lineno, "states wants: n q0 qh");
      spec.n_states = parse_int(toks[1], lineno);
      spec.q0 = parse_int(toks[2], lineno);
      spec.qh = parse_int(toks[3], lineno);
      saw_states = true;
    } else if (toks[0] == "delta") {
      if (toks.size() != 7 || toks[3] != "->")
        terr(lineno, "delta wants: q u -> q' a eps");
      int q = parse_int(toks[1], lineno), u = parse_int(toks[2], lineno);
      int q2 = parse_int(toks[4], lineno), a = parse_int(toks[5], lineno);
      int eps = parse_int(toks[6], lineno);
      if (!spec.delta.emplace(std::make_pair(q, u), std::make_tuple(q2, a, eps)).second)
        terr(lineno, "duplicate transition");
    } else {
      terr(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (!saw_states) throw TuringError("missing 'states' header");
  if (spec.q0 < 0 || spec.q0 >= spec.n_states || spec.qh < 0 || spec.qh >= spec.n_states)
    throw TuringError("q0/qh out of range");
  for (const auto& [k, v] : spec.delta) {
    auto [q, u] = k;
    auto [q2, a, eps] = v;
    if (q < 0 || q >= spec.n_states || q2 < 0 || q2 >= spec.n_states)
      throw TuringError("transition state out of range");
    if (u < 0 || u > 2 || a < 0 || a > 2) throw TuringError("symbol out of range");
    if (eps < 0 || eps > 2) throw TuringError("eps out of range");
  }
  return spec;
}

namespace {

// transitions with the halting self-loops filled in
std::map<std::pair<int, int>, std::tuple<int, int, int>> full_delta(const TMSpec& s) {
  auto d = s.delta;
  for (int u = 0; u < 3; ++u)
    d.emplace(std::make_pair(s.qh, u), std::make_tuple(s.qh, u, 1));
  return d;
}

}  // namespace

TMConfig reference_step(const TMSpec& spec, const TMConfig& c) {
  int m = static_cast<int>(c.tape.size());
  if (c.p < 1 || c.p > m) throw TuringError("head escaped the tape window");
  int u = c.tape[static_cast<size_t>(c.p - 1)];
  auto d = full_delta(spec);
  auto it = d.find({c.q, u});
  if (it == d.end())
    throw TuringError("no transition for state " + std::to_string(c.q) + " on symbol " +
                      std::to_string(u));
  auto [q2, a, eps] = it->second;
  TMConfig out = c;
  out.q = q2;
  out.tape[static_cast<size_t>(c.p - 1)] = a;
  out.p = c.p + eps - 1;
  if (out.p < 1 || out.p > m) throw TuringError("head escaped the tape window");
  return out;
}

std::vector<TMConfig> reference_run(const TMSpec& spec, TMConfig c, int steps) {
  std::vector<TMConfig> traj{c};
  for (int k = 0; k < steps; ++k) traj.push_back(reference_step(spec, traj.back()));
  return traj;
}

namespace {

const Rat kSel = 4;  // selector gap; symbol values never exceed 2

// Linear-quandle gadget emitter. Shared rational constants are used as agents
// (agents are read-only); every patient constant is minted fresh because
// strands are consumed.
struct Emit {
  explicit Emit(MachineBuilder& bb) : b(bb) {}
  MachineBuilder& b;
  std::map<Rat, RegisterId> agent_pool;
  OpLabel half = OpLabel::linear(Rat(1, 2));
  OpLabel two = OpLabel::linear(Rat(2));

  RegisterId agent(const Rat& v) {
    auto it = agent_pool.find(v);
    if (it != agent_pool.end()) return it->second;
    RegisterId r = b.constant(Colour(v));
    agent_pool.emplace(v, r);
    return r;
  }
  RegisterId c0() { return b.constant(Colour(Rat(0))); }

  // x + [y]  (consumes x, y used as agent)
  RegisterId add(RegisterId x, RegisterId y) {
    return b.interact(b.interact(y, half, x), two, c0());
  }
  RegisterId add_k(RegisterId x, const Rat& k) { return add(x, agent(k)); }
  // 1 - x
  RegisterId neg(RegisterId x) { return b.interact(agent(Rat(1, 2)), two, x); }
  // v * [y]  (v != 1)
  RegisterId scale_agent(const Rat& v, RegisterId y) {
    return b.interact(y, OpLabel::linear(v), c0());
  }
  // 1 if x > 0 else 0, for x >= 0
  RegisterId indicator(RegisterId x) {
    RegisterId t = b.wye(WyeMode::Max, x, c0());
    return b.wye(WyeMode::Min, t, b.constant(Colour(Rat(1))));
  }
  // n copies of x through zero-strand multiplexers
  std::vector<RegisterId> mux(RegisterId x, int n) {
    std::vector<RegisterId> copies{x};
    while (static_cast<int>(copies.size()) < n) {
      RegisterId src = copies.back();
      copies.pop_back();
      RegisterId z = c0();
      RegisterId c = b.interact(z, half, src);
      RegisterId d = b.interact(c, two, z);
      RegisterId e = b.interact(src, two, c);
      RegisterId f = b.interact(c, half, e);
      copies.push_back(d);
      copies.push_back(f);
    }
    return copies;
  }
  // one-hot: bits[v] = 1 iff x == v (consumes x)
  std::map<int, RegisterId> mask(RegisterId x, const std::vector<int>& values) {
    auto copies = mux(x, 2 * static_cast<int>(values.size()));
    std::map<int, RegisterId> bits;
    size_t ci = 0;
    for (int v : values) {
      RegisterId d2 = add_k(copies[ci++], Rat(-v));           // x - v
      RegisterId d1 = add_k(neg(copies[ci++]), Rat(v - 1));   // v - x
      RegisterId kappa = b.wye(WyeMode::Max, d1, d2);         // |x - v|
      bits[v] = neg(indicator(kappa));
    }
    return bits;
  }
  // x if [c] == 0 else y, for symbol-sized x, y (consumes x and y)
  RegisterId selector(RegisterId c, RegisterId x, RegisterId y) {
    RegisterId k1 = scale_agent(kSel, c);  // kSel * c
    RegisterId nk1 = neg(k1);              // used as agent below before k1 is consumed
    RegisterId u1 = add_k(add(x, nk1), Rat(-1));  // x - kSel*c
    RegisterId u2 = add_k(add(y, k1), -kSel);     // y + kSel*c - kSel
    return b.wye(WyeMode::Max, u1, u2);
  }
};

// pins sum(mask bits) == 1; a pointer outside 1..m zeroes every bit and the
// pre-coloured end register makes the colouring inconsistent
void emit_bounds(Emit& E, const std::map<int, RegisterId>& mask_bits) {
  RegisterId g = E.c0();
  for (auto& [i, bit] : mask_bits) g = E.add(g, bit);
  RegisterId endreg = E.b.interact(E.agent(Rat(1)), E.two, E.scale_agent(2, g));  // 2 - 2g
  E.b.pin(endreg, Colour(Rat(0)));
}

struct FCOut {
  RegisterId q, a, eps;
};

// Hardwired finite control: one-hot masks on (q, u), a matched/unmatched
// +-(v+2) ladder per transition, componentwise max, then -2.
FCOut emit_fc(Emit& E, const std::map<std::pair<int, int>, std::tuple<int, int, int>>& delta,
              int n_states, RegisterId q, RegisterId u) {
  std::vector<int> qvals, uvals{0, 1, 2};
  for (int i = 0; i < n_states; ++i) qvals.push_back(i);
  auto mq = E.mask(q, qvals);
  auto mu = E.mask(u, uvals);

  std::map<int, int> quse, uuse;
  for (const auto& [k, v] : delta) {
    quse[k.first]++;
    uuse[k.second]++;
  }
  std::map<int, std::vector<RegisterId>> qcop, ucop;
  for (auto& [v, bit] : mq) qcop[v] = E.mux(bit, std::max(1, quse[v]));
  for (auto& [v, bit] : mu) ucop[v] = E.mux(bit, std::max(1, uuse[v]));

  std::array<std::vector<RegisterId>, 3> comps;
  for (const auto& [k, v] : delta) {
    RegisterId qb = qcop[k.first].back();
    qcop[k.first].pop_back();
    RegisterId ub = ucop[k.second].back();
    ucop[k.second].pop_back();
    RegisterId bit = E.b.wye(WyeMode::Min, qb, ub);
    RegisterId beta = E.add_k(E.scale_agent(2, bit), -1);  // 2*bit - 1
    int vals[3] = {std::get<0>(v), std::get<1>(v), std::get<2>(v)};
    for (int j = 0; j < 3; ++j)
      comps[static_cast<size_t>(j)].push_back(E.scale_agent(Rat(vals[j] + 2), beta));
  }
  RegisterId outs[3];
  for (int j = 0; j < 3; ++j) {
    auto& vec = comps[static_cast<size_t>(j)];
    RegisterId acc = vec[0];
    for (size_t i = 1; i < vec.size(); ++i) acc = E.b.wye(WyeMode::Max, acc, vec[i]);
    outs[j] = E.add_k(acc, -2);
  }
  return {outs[0], outs[1], outs[2]};
}

struct StepRegs {
  RegisterId q, p;
  std::vector<RegisterId> cells;
};

StepRegs emit_step(Emit& E, const std::map<std::pair<int, int>, std::tuple<int, int, int>>& delta,
                   int n_states, const StepRegs& in, RegisterId* u_out) {
  int m = static_cast<int>(in.cells.size());
  auto pc = E.mux(in.p, 2);
  std::vector<int> pvals;
  for (int i = 1; i <= m; ++i) pvals.push_back(i);
  auto pm = E.mask(pc[0], pvals);  // mask bits only ever used as agents here
  emit_bounds(E, pm);

  std::vector<RegisterId> c_read, c_write;
  for (RegisterId c : in.cells) {
    auto cp = E.mux(c, 2);
    c_read.push_back(cp[0]);
    c_write.push_back(cp[1]);
  }

  // read u = sum_i selector(mask_i, 0, c_i)
  RegisterId u = 0;
  bool first = true;
  for (int i = 1; i <= m; ++i) {
    RegisterId t = E.selector(pm[i], E.c0(), c_read[static_cast<size_t>(i - 1)]);
    u = first ? t : E.add(u, t);
    first = false;
  }
  if (u_out) *u_out = u;

  FCOut fc = emit_fc(E, delta, n_states, in.q, u);

  // write
  auto ac = E.mux(fc.a, m);
  StepRegs out;
  out.q = fc.q;
  for (int i = 1; i <= m; ++i)
    out.cells.push_back(
        E.selector(pm[i], c_write[static_cast<size_t>(i - 1)], ac[static_cast<size_t>(i - 1)]));

  // move: p' = p + eps - 1
  out.p = E.add_k(E.add(pc[1], fc.eps), -1);
  return out;
}

int decode_int(const Colour& c, const char* what) {
  if (c.kind() != Colour::Kind::Rational || denominator(c.rat()) != 1)
    throw TuringError(std::string("register for ") + what + " holds non-integer colour " +
                      colour_str(c));
  return static_cast<int>(numerator(c.rat()).convert_to<long>());
}

}  // namespace

CompiledTM compile_tm(const TMSpec& spec, int tape_len, int steps, bool closed) {
  if (tape_len < 1) throw TuringError("tape window must have at least one cell");
  if (steps < 1) throw TuringError("need at least one step");
  auto delta = full_delta(spec);

  MachineBuilder b("tm", "linear");
  Emit E(b);
  StepRegs cur;
  cur.q = b.input();
  cur.p = b.input();
  for (int i = 0; i < tape_len; ++i) cur.cells.push_back(b.input());

  CompiledTM ct;
  ct.tape_len = tape_len;
  ct.steps = steps;
  ct.q_regs.push_back(cur.q);
  ct.p_regs.push_back(cur.p);
  ct.cell_regs.push_back(cur.cells);
  for (int k = 0; k < steps; ++k) {
    RegisterId u = 0;
    cur = emit_step(E, delta, spec.n_states, cur, &u);
    ct.u_regs.push_back(u);
    ct.q_regs.push_back(cur.q);
    ct.p_regs.push_back(cur.p);
    ct.cell_regs.push_back(cur.cells);
    b.label(cur.q, "q" + std::to_string(k + 1));
    b.label(cur.p, "p" + std::to_string(k + 1));
  }
  {
    // the step gadget checks p(k) for k < steps; check the final head too
    auto pc = E.mux(cur.p, 2);
    std::vector<int> pvals;
    for (int i = 1; i <= tape_len; ++i) pvals.push_back(i);
    emit_bounds(E, E.mask(pc[1], pvals));
    cur.p = pc[0];
    ct.p_regs.back() = cur.p;
  }
  b.mark_output(cur.q);
  b.mark_output(cur.p);
  for (RegisterId c : cur.cells) b.mark_output(c);
  ct.m = b.take();

  if (closed) {
    // splice the final configuration back onto the initial one
    std::map<RegisterId, RegisterId> remap{{ct.q_regs[0], cur.q}, {ct.p_regs[0], cur.p}};
    for (int i = 0; i < tape_len; ++i)
      remap.emplace(ct.cell_regs[0][static_cast<size_t>(i)],
                    cur.cells[static_cast<size_t>(i)]);
    auto rm = [&](RegisterId r) {
      auto it = remap.find(r);
      return it == remap.end() ? r : it->second;
    };
    for (auto& i : ct.m.interactions) {
      i.agent = rm(i.agent);
      for (auto& p : i.patients) {
        p.in = rm(p.in);
        p.out = rm(p.out);
      }
    }
    for (auto& w : ct.m.wyes) {
      w.in1 = rm(w.in1);
      w.in2 = rm(w.in2);
      w.out = rm(w.out);
    }
    std::erase_if(ct.m.registers, [&](RegisterId r) { return remap.count(r) != 0; });
    ct.m.inputs.clear();
    ct.m.outputs.clear();
    ct.q_regs[0] = cur.q;
    ct.p_regs[0] = cur.p;
    ct.cell_regs[0] = cur.cells;
  }
  validate(ct.m);
  return ct;
}

std::vector<TMConfig> run_compiled(const CompiledTM& ct, const TMConfig& start) {
  if (static_cast<int>(start.tape.size()) != ct.tape_len)
    throw TuringError("start tape length mismatch");
  std::map<RegisterId, Colour> rho;
  rho.emplace(ct.q_regs[0], Colour(Rat(start.q)));
  rho.emplace(ct.p_regs[0], Colour(Rat(start.p)));
  for (int i = 0; i < ct.tape_len; ++i)
    rho.emplace(ct.cell_regs[0][static_cast<size_t>(i)],
                Colour(Rat(start.tape[static_cast<size_t>(i)])));
  ColouringResult r = propagate(ct.m, rho);
  if (r.status == ColouringStatus::Inconsistent)
    throw TuringError("inconsistent colouring (head escape?): " + r.detail);
  std::vector<TMConfig> traj;
  for (int k = 0; k <= ct.steps; ++k) {
    TMConfig c;
    c.q = decode_int(r.colours.at(ct.q_regs[static_cast<size_t>(k)]), "state");
    c.p = decode_int(r.colours.at(ct.p_regs[static_cast<size_t>(k)]), "head");
    for (int i = 0; i < ct.tape_len; ++i)
      c.tape.push_back(
          decode_int(r.colours.at(ct.cell_regs[static_cast<size_t>(k)][static_cast<size_t>(i)]),
                     "cell"));
    traj.push_back(std::move(c));
  }
  return traj;
}

size_t op_count(const TangleMachine& m) {
  std::set<OpLabel> ops;
  for (const auto& i : m.interactions) ops.insert(i.op);
  return ops.size();
}

}  // namespace tangle

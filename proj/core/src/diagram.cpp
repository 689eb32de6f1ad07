#include "tangle/diagram.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>
#include <tuple>

namespace tangle {

namespace {

std::string idstr(RegisterId r) { return std::to_string(r); }

struct Uses {
  std::map<RegisterId, int> produced, consumed;
};

Uses count_uses(const TangleMachine& m) {
  Uses u;
  for (const auto& i : m.interactions)
    for (const auto& p : i.patients) {
      u.produced[p.out]++;
      u.consumed[p.in]++;
    }
  for (const auto& w : m.wyes) {
    u.produced[w.out]++;
    u.consumed[w.in1]++;
    u.consumed[w.in2]++;
  }
  return u;
}

}  // namespace

void validate(const TangleMachine& m) {
  std::set<RegisterId> regs(m.registers.begin(), m.registers.end());
  if (regs.size() != m.registers.size())
    throw DiagramError("duplicate register declaration");
  auto known = [&](RegisterId r, const char* role) {
    if (!regs.count(r))
      throw DiagramError(std::string("unknown register ") + idstr(r) + " used as " + role);
  };

  std::set<RegisterId> ins(m.inputs.begin(), m.inputs.end());
  std::set<RegisterId> outs(m.outputs.begin(), m.outputs.end());
  if (ins.size() != m.inputs.size()) throw DiagramError("duplicate input register");
  if (outs.size() != m.outputs.size()) throw DiagramError("duplicate output register");
  for (RegisterId r : m.inputs) {
    known(r, "input");
    if (outs.count(r))
      throw DiagramError("register " + idstr(r) + " is both input and output");
    if (m.constants.count(r))
      throw DiagramError("input register " + idstr(r) + " is pre-coloured");
  }
  for (RegisterId r : m.outputs) known(r, "output");
  for (const auto& [r, c] : m.constants) known(r, "constant");

  for (const auto& i : m.interactions) {
    known(i.agent, "agent");
    if (i.patients.empty()) throw DiagramError("interaction with no patients");
    for (const auto& p : i.patients) {
      known(p.in, "patient in");
      known(p.out, "patient out");
    }
  }
  for (const auto& w : m.wyes) {
    known(w.in1, "wye in");
    known(w.in2, "wye in");
    known(w.out, "wye out");
  }

  Uses u = count_uses(m);
  // pre-coloured registers may be produced: the pre-colour then acts as an
  // assertion checked by the colouring (that is how closed struts and the
  // pointer-bounds gadget force inconsistency)
  for (const auto& [r, n] : u.produced) {
    if (n > 1) throw DiagramError("register " + idstr(r) + " produced more than once");
    if (ins.count(r)) throw DiagramError("input register " + idstr(r) + " is produced");
  }
  for (const auto& [r, n] : u.consumed)
    if (n > 1)
      throw DiagramError("register " + idstr(r) +
                         " consumed as patient more than once (strands are linear)");
  for (const auto& [r, name] : m.labels) known(r, "label");
}

RegisterId producer_count(const TangleMachine& m, RegisterId r) {
  auto u = count_uses(m);
  auto it = u.produced.find(r);
  return it == u.produced.end() ? 0 : static_cast<RegisterId>(it->second);
}

TangleMachine concat(const TangleMachine& m1, const TangleMachine& m2,
                     const std::vector<std::pair<RegisterId, RegisterId>>& bindings) {
  validate(m1);
  validate(m2);
  if (m1.quagma != m2.quagma)
    throw DiagramError("concat of machines over different quagmas");

  std::set<RegisterId> outs1(m1.outputs.begin(), m1.outputs.end());
  std::set<RegisterId> ins2(m2.inputs.begin(), m2.inputs.end());
  std::set<RegisterId> seen1;
  std::set<RegisterId> seen2;
  std::map<RegisterId, RegisterId> bind2;  // m2 input -> m1 output
  for (auto [o1, i2] : bindings) {
    if (!outs1.count(o1)) throw DiagramError("binding from non-output " + idstr(o1));
    if (!ins2.count(i2)) throw DiagramError("binding to non-input " + idstr(i2));
    if (!seen1.insert(o1).second) throw DiagramError("output " + idstr(o1) + " bound twice");
    if (!seen2.insert(i2).second) throw DiagramError("input " + idstr(i2) + " bound twice");
    bind2[i2] = o1;
  }

  RegisterId offset = 0;
  for (RegisterId r : m1.registers) offset = std::max(offset, r + 1);
  auto remap = [&](RegisterId r) -> RegisterId {
    auto it = bind2.find(r);
    return it != bind2.end() ? it->second : r + offset;
  };

  TangleMachine out = m1;
  out.name = m1.name + "+" + m2.name;
  for (RegisterId r : m2.registers)
    if (!bind2.count(r)) out.registers.push_back(r + offset);
  for (const auto& i : m2.interactions) {
    Interaction ni{remap(i.agent), i.op, {}};
    for (const auto& p : i.patients) ni.patients.push_back({remap(p.in), remap(p.out)});
    out.interactions.push_back(std::move(ni));
  }
  for (const auto& w : m2.wyes)
    out.wyes.push_back({w.mode, remap(w.in1), remap(w.in2), remap(w.out)});
  for (RegisterId r : m2.inputs)
    if (!bind2.count(r)) out.inputs.push_back(r + offset);
  out.outputs.clear();
  for (RegisterId r : m1.outputs)
    if (!seen1.count(r)) out.outputs.push_back(r);
  for (RegisterId r : m2.outputs) out.outputs.push_back(remap(r));
  for (const auto& [r, c] : m2.constants) out.constants.emplace(remap(r), c);
  for (const auto& [r, name] : m2.labels) out.labels[remap(r)] = name;
  validate(out);
  return out;
}

TangleMachine canonicalize(const TangleMachine& m) {
  validate(m);
  // Dataflow edges: patient out depends on patient in and agent; wye out on both ins.
  std::map<RegisterId, std::vector<RegisterId>> succ;
  std::map<RegisterId, int> indeg;
  for (RegisterId r : m.registers) indeg[r] = 0;
  auto edge = [&](RegisterId a, RegisterId b) {
    succ[a].push_back(b);
    indeg[b]++;
  };
  for (const auto& i : m.interactions)
    for (const auto& p : i.patients) {
      edge(p.in, p.out);
      edge(i.agent, p.out);
    }
  for (const auto& w : m.wyes) {
    edge(w.in1, w.out);
    edge(w.in2, w.out);
  }

  std::map<RegisterId, size_t> creation;
  for (size_t i = 0; i < m.registers.size(); ++i) creation[m.registers[i]] = i;

  // Kahn's algorithm. Ties in the ready set are broken structurally —
  // inputs (by position), then constants (by value), outputs (by position),
  // labelled registers (by label) — falling back to creation index, so the
  // labelling survives register-list reordering by rewrites. Cycles (closed
  // machines) are broken by releasing the smallest-keyed remaining register.
  using Key = std::tuple<int, std::string, size_t>;
  auto key_of = [&](RegisterId r) -> Key {
    for (size_t i = 0; i < m.inputs.size(); ++i)
      if (m.inputs[i] == r) return {0, "", i};
    if (auto it = m.constants.find(r); it != m.constants.end())
      return {1, colour_str(it->second), creation[r]};
    for (size_t i = 0; i < m.outputs.size(); ++i)
      if (m.outputs[i] == r) return {2, "", i};
    if (auto it = m.labels.find(r); it != m.labels.end())
      return {3, it->second, creation[r]};
    return {4, "", creation[r]};
  };
  std::set<std::pair<Key, RegisterId>> ready;
  std::set<RegisterId> done;
  for (RegisterId r : m.registers)
    if (indeg[r] == 0) ready.insert({key_of(r), r});
  std::map<RegisterId, RegisterId> newid;
  RegisterId next = 0;
  while (done.size() < m.registers.size()) {
    RegisterId r;
    if (!ready.empty()) {
      r = ready.begin()->second;
      ready.erase(ready.begin());
    } else {
      r = 0;
      Key best{INT_MAX, "", SIZE_MAX};
      bool have = false;
      for (RegisterId cand : m.registers)
        if (!done.count(cand) && (!have || key_of(cand) < best)) {
          best = key_of(cand);
          r = cand;
          have = true;
        }
    }
    if (done.count(r)) continue;
    done.insert(r);
    newid[r] = next++;
    for (RegisterId s : succ[r])
      if (!done.count(s) && --indeg[s] == 0) ready.insert({key_of(s), s});
  }

  TangleMachine out;
  out.name = m.name;
  out.quagma = m.quagma;
  out.registers.resize(m.registers.size());
  for (size_t i = 0; i < out.registers.size(); ++i)
    out.registers[i] = static_cast<RegisterId>(i);
  for (RegisterId r : m.inputs) out.inputs.push_back(newid[r]);
  for (RegisterId r : m.outputs) out.outputs.push_back(newid[r]);
  for (const auto& [r, c] : m.constants) out.constants.emplace(newid[r], c);
  for (const auto& [r, name] : m.labels) out.labels[newid[r]] = name;
  for (const auto& i : m.interactions) {
    Interaction ni{newid[i.agent], i.op, {}};
    for (const auto& p : i.patients) ni.patients.push_back({newid[p.in], newid[p.out]});
    out.interactions.push_back(std::move(ni));
  }
  for (const auto& w : m.wyes)
    out.wyes.push_back({w.mode, newid[w.in1], newid[w.in2], newid[w.out]});

  auto ikey = [](const Interaction& i) {
    RegisterId k = UINT32_MAX;
    for (const auto& p : i.patients) k = std::min(k, p.out);
    return std::pair<RegisterId, RegisterId>(k, i.agent);
  };
  std::stable_sort(out.interactions.begin(), out.interactions.end(),
                   [&](const Interaction& a, const Interaction& b) { return ikey(a) < ikey(b); });
  std::stable_sort(out.wyes.begin(), out.wyes.end(),
                   [](const Wye& a, const Wye& b) { return a.out < b.out; });
  return out;
}

std::string serialize(const TangleMachine& raw) {
  TangleMachine m = canonicalize(raw);
  std::set<RegisterId> ins(m.inputs.begin(), m.inputs.end());
  std::set<RegisterId> outs(m.outputs.begin(), m.outputs.end());
  std::ostringstream os;
  os << "machine " << m.name << "\n";
  os << "quagma " << m.quagma << "\n";
  for (RegisterId r : m.registers) {
    os << "reg " << r;
    if (ins.count(r)) os << " in";
    if (outs.count(r)) os << " out";
    auto it = m.constants.find(r);
    if (it != m.constants.end()) os << " = " << colour_str(it->second);
    os << "\n";
  }
  for (const auto& i : m.interactions) {
    os << "inter " << i.agent << " " << op_str(i.op);
    for (const auto& p : i.patients) os << " " << p.in << "->" << p.out;
    os << "\n";
  }
  for (const auto& w : m.wyes)
    os << "wye " << (w.mode == WyeMode::Max ? "max" : "min") << " " << w.in1 << " "
       << w.in2 << " -> " << w.out << "\n";
  for (const auto& [r, name] : m.labels) os << "label " << r << " " << name << "\n";
  return os.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

[[noreturn]] void perr(int lineno, const std::string& msg) {
  throw DiagramError("line " + std::to_string(lineno) + ": " + msg);
}

RegisterId parse_id(const std::string& t, int lineno) {
  try {
    size_t pos = 0;
    unsigned long v = std::stoul(t, &pos);
    if (pos != t.size()) perr(lineno, "bad register id '" + t + "'");
    return static_cast<RegisterId>(v);
  } catch (const std::logic_error&) {
    perr(lineno, "bad register id '" + t + "'");
  }
}

}  // namespace

TangleMachine parse_machine(const std::string& text) {
  TangleMachine m;
  m.name.clear();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_machine = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "machine") {
      if (toks.size() != 2) perr(lineno, "machine wants a name");
      m.name = toks[1];
      saw_machine = true;
    } else if (kw == "quagma") {
      if (toks.size() != 2) perr(lineno, "quagma wants a kind");
      m.quagma = toks[1];
    } else if (kw == "reg") {
      if (toks.size() < 2) perr(lineno, "reg wants an id");
      RegisterId r = parse_id(toks[1], lineno);
      m.registers.push_back(r);
      size_t i = 2;
      for (; i < toks.size() && toks[i] != "="; ++i) {
        if (toks[i] == "in")
          m.inputs.push_back(r);
        else if (toks[i] == "out")
          m.outputs.push_back(r);
        else
          perr(lineno, "bad reg flag '" + toks[i] + "'");
      }
      if (i < toks.size()) {  // "= <colour>" — colour literal may not contain spaces
        if (i + 1 >= toks.size()) perr(lineno, "missing colour after '='");
        std::string lit = toks[i + 1];
        for (size_t j = i + 2; j < toks.size(); ++j) lit += toks[j];
        auto c = parse_colour(lit);
        if (!c) perr(lineno, "bad colour literal '" + lit + "'");
        m.constants.emplace(r, *c);
      }
    } else if (kw == "inter") {
      if (toks.size() < 4) perr(lineno, "inter wants agent, op and at least one pair");
      Interaction it;
      it.agent = parse_id(toks[1], lineno);
      auto op = parse_op(toks[2]);
      if (!op) perr(lineno, "bad op '" + toks[2] + "'");
      it.op = *op;
      for (size_t i = 3; i < toks.size(); ++i) {
        auto arrow = toks[i].find("->");
        if (arrow == std::string::npos) perr(lineno, "bad patient pair '" + toks[i] + "'");
        it.patients.push_back({parse_id(toks[i].substr(0, arrow), lineno),
                               parse_id(toks[i].substr(arrow + 2), lineno)});
      }
      m.interactions.push_back(std::move(it));
    } else if (kw == "wye") {
      if (toks.size() != 6 || toks[4] != "->") perr(lineno, "wye wants: max|min a b -> c");
      WyeMode mode;
      if (toks[1] == "max")
        mode = WyeMode::Max;
      else if (toks[1] == "min")
        mode = WyeMode::Min;
      else
        perr(lineno, "bad wye mode '" + toks[1] + "'");
      m.wyes.push_back({mode, parse_id(toks[2], lineno), parse_id(toks[3], lineno),
                        parse_id(toks[5], lineno)});
    } else if (kw == "label") {
      if (toks.size() != 3) perr(lineno, "label wants id and name");
      m.labels[parse_id(toks[1], lineno)] = toks[2];
    } else {
      perr(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!saw_machine) throw DiagramError("missing 'machine' header");
  validate(m);
  return m;
}

std::string to_dot(const TangleMachine& raw) {
  TangleMachine m = canonicalize(raw);
  std::set<RegisterId> ins(m.inputs.begin(), m.inputs.end());
  std::set<RegisterId> outs(m.outputs.begin(), m.outputs.end());

  // producer node name per register
  std::map<RegisterId, std::string> prod;
  for (size_t i = 0; i < m.interactions.size(); ++i)
    for (const auto& p : m.interactions[i].patients)
      prod[p.out] = "i" + std::to_string(i);
  for (size_t i = 0; i < m.wyes.size(); ++i) prod[m.wyes[i].out] = "y" + std::to_string(i);
  auto src = [&](RegisterId r) -> std::string {
    auto it = prod.find(r);
    return it != prod.end() ? it->second : "r" + idstr(r);
  };

  std::ostringstream os;
  os << "digraph \"" << m.name << "\" {\n  rankdir=LR;\n";
  for (RegisterId r : m.registers)
    if (!prod.count(r)) {
      os << "  r" << r << " [shape=" << (ins.count(r) ? "circle" : "point") << ",label=\"" << r
         << "\"];\n";
    }
  for (size_t i = 0; i < m.interactions.size(); ++i)
    os << "  i" << i << " [shape=box,label=\"" << op_str(m.interactions[i].op) << "\"];\n";
  for (size_t i = 0; i < m.wyes.size(); ++i)
    os << "  y" << i << " [shape=diamond,label=\""
       << (m.wyes[i].mode == WyeMode::Max ? "max" : "min") << "\"];\n";
  for (RegisterId r : m.outputs) os << "  o" << r << " [shape=doublecircle,label=\"" << r << "\"];\n";

  auto lbl = [&](RegisterId r) {
    auto it = m.labels.find(r);
    return it != m.labels.end() ? idstr(r) + ":" + it->second : idstr(r);
  };
  for (size_t i = 0; i < m.interactions.size(); ++i) {
    const auto& it = m.interactions[i];
    for (const auto& p : it.patients)
      os << "  " << src(p.in) << " -> i" << i << " [label=\"" << lbl(p.in) << "\"];\n";
    os << "  " << src(it.agent) << " -> i" << i << " [style=dashed,label=\"" << lbl(it.agent)
       << "\"];\n";
  }
  for (size_t i = 0; i < m.wyes.size(); ++i) {
    os << "  " << src(m.wyes[i].in1) << " -> y" << i << " [label=\"" << lbl(m.wyes[i].in1)
       << "\"];\n";
    os << "  " << src(m.wyes[i].in2) << " -> y" << i << " [label=\"" << lbl(m.wyes[i].in2)
       << "\"];\n";
  }
  for (RegisterId r : m.outputs)
    os << "  " << src(r) << " -> o" << r << " [label=\"" << lbl(r) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace tangle

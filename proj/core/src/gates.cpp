#include "tangle/gates.hpp"

#include <map>
#include <set>
#include <sstream>

namespace tangle {

namespace {

const char* backend_tag(Backend b) { return b == Backend::Quagma ? "mixed2x2" : "fox3"; }

Colour zero_colour(Backend b) {
  return b == Backend::Quagma ? Colour(zero2()) : Colour::fox3(0);
}

RegisterId emit_not(MachineBuilder& b, Backend be, RegisterId x) {
  if (be == Backend::Fox3) {
    // agent 2: ¬x = 4 - x = 1 - x (mod 3)
    RegisterId c = b.constant(Colour::fox3(2));
    return b.interact(c, OpLabel::fox3(), x);
  }
  RegisterId c = b.constant(Colour(pauli_a0_plus_a1()));
  return b.interact(c, OpLabel::conj_guarded(), x);
}

// The conjugation/averaging AND over Pauli-encoded bits:
//   β1 = (A0+A1) ▶ (x ▷½ y),  β2 = β1 ▷½ (A0+A1),
//   β3 = (β2 ▶ A0) ▷½ β2,     out = A1 ▶ (β3 ▷½ A1)
RegisterId emit_and_quagma(MachineBuilder& b, RegisterId x, RegisterId y) {
  OpLabel half = OpLabel::linear(Rat(1, 2));
  OpLabel conj = OpLabel::conj_guarded();
  RegisterId c1 = b.constant(Colour(pauli_a0_plus_a1()));
  RegisterId c2 = b.constant(Colour(pauli_a0()));
  RegisterId c3 = b.constant(Colour(pauli_a1()));
  RegisterId w = b.interact(y, half, x);
  RegisterId b1 = b.interact(w, conj, c1);
  b.label(b1, "beta1");
  RegisterId b2 = b.interact(c1, half, b1);
  b.label(b2, "beta2");
  RegisterId t1 = b.interact(c2, conj, b2);
  RegisterId b3 = b.interact(b2, half, t1);
  b.label(b3, "beta3");
  RegisterId t2 = b.interact(c3, half, b3);
  return b.interact(t2, conj, c3);
}

RegisterId emit_and(MachineBuilder& b, Backend be, RegisterId x, RegisterId y) {
  if (be == Backend::Fox3) return b.wye(WyeMode::Min, x, y);
  return emit_and_quagma(b, x, y);
}

// Duplicates x into two copies using one zero-coloured strand z.
std::pair<RegisterId, RegisterId> emit_mux2(MachineBuilder& b, Backend be, RegisterId x,
                                            RegisterId z) {
  if (be == Backend::Fox3) {
    OpLabel fox = OpLabel::fox3();
    RegisterId c = b.interact(x, fox, z);  // 2x
    RegisterId d = b.interact(c, fox, x);  // 3x = 0
    RegisterId e = b.interact(c, fox, d);  // 4x = x
    RegisterId f = b.interact(d, fox, c);  // -2x = x
    return {e, f};
  }
  OpLabel half = OpLabel::linear(Rat(1, 2));
  OpLabel two = OpLabel::linear(Rat(2));
  RegisterId c = b.interact(z, half, x);  // x/2
  RegisterId d = b.interact(c, two, z);   // x
  RegisterId e = b.interact(x, two, c);   // 3x/2
  RegisterId f = b.interact(c, half, e);  // x
  return {d, f};
}

// n copies of x; zeros() supplies the n-1 zero strands.
template <typename Zeros>
std::vector<RegisterId> emit_mux(MachineBuilder& b, Backend be, RegisterId x, int n,
                                 Zeros&& zeros) {
  std::vector<RegisterId> copies{x};
  while (static_cast<int>(copies.size()) < n) {
    RegisterId src = copies.back();
    copies.pop_back();
    auto [p, q] = emit_mux2(b, be, src, zeros());
    copies.push_back(p);
    copies.push_back(q);
  }
  return copies;
}

}  // namespace

TangleMachine build_gate(GateKind kind, Backend be, int fanout) {
  const char* names[] = {"not", "and", "mux"};
  MachineBuilder b(std::string(names[static_cast<int>(kind)]) +
                       (be == Backend::Quagma ? "q" : "f3"),
                   backend_tag(be));
  switch (kind) {
    case GateKind::Not: {
      RegisterId x = b.input();
      b.mark_output(emit_not(b, be, x));
      break;
    }
    case GateKind::And: {
      RegisterId x = b.input(), y = b.input();
      b.mark_output(emit_and(b, be, x, y));
      break;
    }
    case GateKind::Mux: {
      if (fanout < 2) throw GateError("mux fanout must be >= 2");
      RegisterId x = b.input();
      std::vector<RegisterId> zs;
      for (int i = 1; i < fanout; ++i) zs.push_back(b.input());
      size_t zi = 0;
      auto copies = emit_mux(b, be, x, fanout, [&] { return zs[zi++]; });
      for (RegisterId r : copies) b.mark_output(r);
      break;
    }
  }
  TangleMachine m = b.take();
  validate(m);
  return m;
}

Colour encode_bit(bool bit, Backend be) {
  if (be == Backend::Fox3) return Colour::fox3(bit ? 1 : 0);
  return bit ? Colour(pauli_a1()) : Colour(pauli_a0());
}

bool decode_bit(const Colour& c, Backend be) {
  for (bool bit : {false, true})
    if (c == encode_bit(bit, be)) return bit;
  throw GateError("colour " + colour_str(c) + " does not decode to a bit");
}

namespace {

[[noreturn]] void cerr_line(int lineno, const std::string& msg) {
  throw GateError("line " + std::to_string(lineno) + ": " + msg);
}

std::vector<std::string> toks_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  Circuit c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  int gensym = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto toks = toks_of(line);
    if (toks.empty()) continue;
    if (toks[0] == "in") {
      for (size_t i = 1; i < toks.size(); ++i) c.inputs.push_back(toks[i]);
    } else if (toks[0] == "out") {
      for (size_t i = 1; i < toks.size(); ++i) c.outputs.push_back(toks[i]);
    } else if (toks.size() >= 3 && toks[1] == "=") {
      const std::string& name = toks[0];
      const std::string& kind = toks[2];
      if (kind == "NOT" && toks.size() == 4) {
        c.nodes.push_back({CircuitNode::Kind::Not, name, toks[3], "", 0});
      } else if (kind == "AND" && toks.size() == 5) {
        c.nodes.push_back({CircuitNode::Kind::And, name, toks[3], toks[4], 0});
      } else if (kind == "FANOUT" && toks.size() == 5) {
        int n;
        try {
          n = std::stoi(toks[4]);
        } catch (const std::logic_error&) {
          cerr_line(lineno, "bad fanout count '" + toks[4] + "'");
        }
        c.nodes.push_back({CircuitNode::Kind::Fanout, name, toks[3], "", n});
      } else if (kind == "OR" && toks.size() == 5) {
        // a OR b = NOT(AND(NOT a, NOT b))
        std::string na = name + "~" + std::to_string(gensym++);
        std::string nb = name + "~" + std::to_string(gensym++);
        std::string ab = name + "~" + std::to_string(gensym++);
        c.nodes.push_back({CircuitNode::Kind::Not, na, toks[3], "", 0});
        c.nodes.push_back({CircuitNode::Kind::Not, nb, toks[4], "", 0});
        c.nodes.push_back({CircuitNode::Kind::And, ab, na, nb, 0});
        c.nodes.push_back({CircuitNode::Kind::Not, name, ab, "", 0});
      } else {
        cerr_line(lineno, "bad node '" + line + "'");
      }
    } else {
      cerr_line(lineno, "unparseable line '" + line + "'");
    }
  }
  validate(c);
  return c;
}

namespace {

// "f[2]" -> {"f", 2}; plain names -> {name, 0}
std::pair<std::string, int> split_ref(const std::string& ref) {
  auto br = ref.find('[');
  if (br == std::string::npos) return {ref, 0};
  if (ref.back() != ']') throw GateError("bad wire reference '" + ref + "'");
  int idx = std::stoi(ref.substr(br + 1, ref.size() - br - 2));
  return {ref.substr(0, br), idx};
}

}  // namespace

void validate(const Circuit& c) {
  std::set<std::string> defined;
  std::map<std::string, int> fanouts;
  for (const auto& w : c.inputs)
    if (!defined.insert(w).second) throw GateError("duplicate input wire '" + w + "'");
  auto check_ref = [&](const std::string& ref) {
    auto [base, idx] = split_ref(ref);
    if (!defined.count(base)) throw GateError("wire '" + base + "' used before definition");
    auto f = fanouts.find(base);
    if (f != fanouts.end()) {
      if (idx < 1 || idx > f->second)
        throw GateError("fanout reference '" + ref + "' out of range");
    } else if (idx != 0) {
      throw GateError("'" + base + "' is not a fanout node");
    }
  };
  for (const auto& n : c.nodes) {
    check_ref(n.a);
    if (n.kind == CircuitNode::Kind::And) check_ref(n.b);
    if (n.kind == CircuitNode::Kind::Fanout) {
      if (n.count < 2) throw GateError("fanout count must be >= 2");
      fanouts[n.name] = n.count;
    }
    if (!defined.insert(n.name).second) throw GateError("duplicate wire '" + n.name + "'");
  }
  for (const auto& w : c.outputs) check_ref(w);
  if (c.outputs.empty()) throw GateError("circuit has no outputs");
}

TangleMachine compile_circuit(const Circuit& c, Backend be) {
  validate(c);
  MachineBuilder b("circuit", backend_tag(be));

  // reference counts per wire (fanout outputs counted individually)
  std::map<std::string, int> uses;
  auto note = [&](const std::string& ref) { uses[ref]++; };
  for (const auto& n : c.nodes) {
    note(n.a);
    if (n.kind == CircuitNode::Kind::And) note(n.b);
  }
  for (const auto& w : c.outputs) note(w);

  // each wire holds a stack of register copies; references pop one
  std::map<std::string, std::vector<RegisterId>> copies;
  auto define = [&](const std::string& wire, RegisterId r) {
    int n = uses.count(wire) ? uses[wire] : 0;
    if (n <= 1) {
      copies[wire] = {r};
      return;
    }
    copies[wire] =
        emit_mux(b, be, r, n, [&] { return b.constant(zero_colour(be)); });
  };
  auto use = [&](const std::string& ref) {
    auto it = copies.find(ref);
    if (it == copies.end() || it->second.empty())
      throw GateError("internal: no copy left for wire '" + ref + "'");
    RegisterId r = it->second.back();
    it->second.pop_back();
    return r;
  };

  for (const auto& w : c.inputs) define(w, b.input());
  for (const auto& n : c.nodes) {
    switch (n.kind) {
      case CircuitNode::Kind::Not:
        define(n.name, emit_not(b, be, use(n.a)));
        break;
      case CircuitNode::Kind::And:
        define(n.name, emit_and(b, be, use(n.a), use(n.b)));
        break;
      case CircuitNode::Kind::Fanout: {
        auto outs =
            emit_mux(b, be, use(n.a), n.count, [&] { return b.constant(zero_colour(be)); });
        for (int i = 0; i < n.count; ++i)
          define(n.name + "[" + std::to_string(i + 1) + "]", outs[static_cast<size_t>(i)]);
        break;
      }
    }
  }
  for (const auto& w : c.outputs) b.mark_output(use(w));
  TangleMachine m = b.take();
  validate(m);
  return m;
}

std::vector<bool> eval_bits(const TangleMachine& m, Backend be,
                            const std::vector<bool>& bits) {
  std::vector<Colour> in;
  in.reserve(bits.size());
  for (bool x : bits) in.push_back(encode_bit(x, be));
  std::vector<bool> out;
  for (const Colour& c : evaluate_io(m, in)) out.push_back(decode_bit(c, be));
  return out;
}

}  // namespace tangle

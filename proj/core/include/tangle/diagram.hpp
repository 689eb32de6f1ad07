#pragma once

#include "tangle/algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace tangle {

using RegisterId = uint32_t;

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PatientPair {
  RegisterId in = 0, out = 0;
  bool operator==(const PatientPair&) const = default;
};

// One interaction: an agent register acting on an ordered list of patient
// strands. The agent's colour is read, never written.
struct Interaction {
  RegisterId agent = 0;
  OpLabel op;
  std::vector<PatientPair> patients;
  bool operator==(const Interaction&) const = default;
};

enum class WyeMode { Max, Min };

struct Wye {
  WyeMode mode = WyeMode::Max;
  RegisterId in1 = 0, in2 = 0, out = 0;
  bool operator==(const Wye&) const = default;
};

struct TangleMachine {
  std::string name = "m";
  std::string quagma = "linear";  // carrier tag: fox3|linear|mixed2x2|belief
  std::vector<RegisterId> registers;       // creation order
  std::vector<Interaction> interactions;
  std::vector<Wye> wyes;
  std::vector<RegisterId> inputs;          // S_in, declared order
  std::vector<RegisterId> outputs;         // S_out, declared order
  std::map<RegisterId, Colour> constants;  // pre-coloured registers
  std::map<RegisterId, std::string> labels;

  bool operator==(const TangleMachine&) const = default;
};

// Structural invariants: ids exist and are unique, S_in/S_out disjoint,
// each register produced at most once, inputs/constants never produced,
// agents are registers, wye arity fixed. Throws DiagramError with a message
// naming the offending id.
void validate(const TangleMachine& m);

RegisterId producer_count(const TangleMachine& m, RegisterId r);

// Serial composition: each (out1 -> in2) binding splices an output strand of
// m1 onto an input strand of m2. Bindings must be injective both ways;
// dangling ids error.
TangleMachine concat(const TangleMachine& m1, const TangleMachine& m2,
                     const std::vector<std::pair<RegisterId, RegisterId>>& bindings);

// Relabels registers 0..n-1 in topological order (ties by creation order) and
// sorts interactions/wyes deterministically. Machine equality up to renaming
// is equality of canonical forms.
TangleMachine canonicalize(const TangleMachine& m);

// Text format:
//   machine <name>
//   quagma <kind>
//   reg <id> [in|out] [= <colour>]
//   inter <agent> <op> <in>-><out> [<in>-><out> ...]
//   wye <max|min> <in1> <in2> -> <out>
//   label <id> <name>
// serialize() canonicalizes first; parse errors carry 1-based line numbers.
std::string serialize(const TangleMachine& m);
TangleMachine parse_machine(const std::string& text);

// Deterministic Graphviz rendering: interactions and wyes as nodes, registers
// as labelled edges, agent edges dashed.
std::string to_dot(const TangleMachine& m);

// Incremental construction helper used by the compilers.
class MachineBuilder {
 public:
  explicit MachineBuilder(std::string name, std::string quagma)
      : m_{} { m_.name = std::move(name); m_.quagma = std::move(quagma); }

  RegisterId fresh() {
    RegisterId r = next_++;
    m_.registers.push_back(r);
    return r;
  }
  RegisterId input() {
    RegisterId r = fresh();
    m_.inputs.push_back(r);
    return r;
  }
  RegisterId constant(Colour c) {
    RegisterId r = fresh();
    m_.constants.emplace(r, std::move(c));
    return r;
  }
  RegisterId interact(RegisterId agent, OpLabel op, RegisterId in) {
    RegisterId out = fresh();
    m_.interactions.push_back({agent, std::move(op), {{in, out}}});
    return out;
  }
  RegisterId wye(WyeMode mode, RegisterId in1, RegisterId in2) {
    RegisterId out = fresh();
    m_.wyes.push_back({mode, in1, in2, out});
    return out;
  }
  // pre-colour an existing (possibly produced) register; see validate()
  void pin(RegisterId r, Colour c) { m_.constants.emplace(r, std::move(c)); }
  void add_patient(size_t interaction_idx, RegisterId in, RegisterId out) {
    m_.interactions.at(interaction_idx).patients.push_back({in, out});
  }
  void mark_output(RegisterId r) { m_.outputs.push_back(r); }
  void label(RegisterId r, std::string name) { m_.labels[r] = std::move(name); }
  TangleMachine take() { return std::move(m_); }
  const TangleMachine& peek() const { return m_; }

 private:
  TangleMachine m_;
  RegisterId next_ = 0;
};

}  // namespace tangle

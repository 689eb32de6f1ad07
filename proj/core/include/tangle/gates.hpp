#pragma once

#include "tangle/colouring.hpp"

namespace tangle {

struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Backend { Quagma, Fox3 };  // Pauli-encoded 2x2 matrices vs Fox-3 residues

enum class GateKind { Not, And, Mux };

// Gate machines. Mux takes a fanout n >= 2 and has inputs (X, 0, ..., 0)
// (n-1 zeros) and n outputs, each coloured X. Mux is the no-cloning workaround:
// duplication costs extra zero-initialized strands.
TangleMachine build_gate(GateKind kind, Backend backend, int fanout = 2);

Colour encode_bit(bool bit, Backend backend);  // false -> A0/f0, true -> A1/f1
bool decode_bit(const Colour& c, Backend backend);  // throws GateError on non-bit

// Combinational circuit IR. Wires are named; args referencing a fanout output
// use the form "name[k]" (1-based).
struct CircuitNode {
  enum class Kind { Not, And, Fanout } kind;
  std::string name;
  std::string a, b;  // b for And
  int count = 0;     // for Fanout
};

struct Circuit {
  std::vector<std::string> inputs;
  std::vector<CircuitNode> nodes;
  std::vector<std::string> outputs;
};

// Text format:
//   in x y ...
//   n1 = NOT x
//   n2 = AND n1 y
//   f  = FANOUT x 3     (outputs f[1]..f[3])
//   n3 = OR a b          (sugar, desugared to NOT/AND at parse time)
//   out n2 ...
Circuit parse_circuit(const std::string& text);

// Defined-before-use, names unique, fanout count >= 2, arity respected.
void validate(const Circuit& c);

// Lowers to one tangle machine. Every wire reference consumes one copy; wires
// referenced k > 1 times are duplicated through implicit mux chains, explicit
// FANOUT nodes likewise. The mux zero strands become pre-coloured constants.
TangleMachine compile_circuit(const Circuit& c, Backend backend);

// encode -> evaluate_io -> decode
std::vector<bool> eval_bits(const TangleMachine& m, Backend backend,
                            const std::vector<bool>& bits);

}  // namespace tangle

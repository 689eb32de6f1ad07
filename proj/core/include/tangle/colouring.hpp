#pragma once

#include "tangle/diagram.hpp"

namespace tangle {

struct ColouringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ColouringStatus { Determined, Underdetermined, Inconsistent };

struct ColouringResult {
  ColouringStatus status = ColouringStatus::Determined;
  std::map<RegisterId, Colour> colours;
  std::string detail;  // offending equation / first uncoloured register
};

// Worklist fixed point over the machine's equations. Seeds = machine constants
// plus rho_in (typically S_in, but closed machines may seed any register).
// Forward: out = apply(op, in, agent); backward: in = apply(invert(op), out,
// agent); wyes forward only. A final pass re-checks every fully-known equation
// (this is what catches unsatisfiable closed loops).
ColouringResult propagate(const TangleMachine& m,
                          const std::map<RegisterId, Colour>& rho_in);

// Zips `inputs` with S_in in declared order, propagates, and returns the
// colours of S_out in declared order. Throws ColouringError unless every
// output is determined and the colouring is consistent.
std::vector<Colour> evaluate_io(const TangleMachine& m, const std::vector<Colour>& inputs);

}  // namespace tangle

#include "tangle/colouring.hpp"

namespace tangle {

namespace {

Colour wye_apply(WyeMode mode, const Colour& a, const Colour& b) {
  bool a_less = a.less(b);
  if (mode == WyeMode::Max) return a_less ? b : a;
  return a_less ? a : b;
}

}  // namespace

ColouringResult propagate(const TangleMachine& m,
                          const std::map<RegisterId, Colour>& rho_in) {
  validate(m);
  ColouringResult res;
  auto& col = res.colours;
  auto inconsistent = [&](std::string why) {
    res.status = ColouringStatus::Inconsistent;
    res.detail = std::move(why);
    return res;
  };

  col = m.constants;
  for (const auto& [r, c] : rho_in) {
    auto [it, fresh] = col.emplace(r, c);
    if (!fresh && !(it->second == c))
      return inconsistent("seed for register " + std::to_string(r) +
                          " conflicts with its pre-colour");
  }

  auto known = [&](RegisterId r) { return col.count(r) != 0; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& i : m.interactions) {
      if (!known(i.agent)) continue;
      const Colour agent = col.at(i.agent);
      for (const auto& p : i.patients) {
        if (known(p.in) && !known(p.out)) {
          col.emplace(p.out, apply(i.op, col.at(p.in), agent));
          changed = true;
        } else if (!known(p.in) && known(p.out) && i.op.kind != OpKind::Belief) {
          col.emplace(p.in, apply(invert(i.op), col.at(p.out), agent));
          changed = true;
        }
      }
    }
    for (const auto& w : m.wyes) {
      if (known(w.in1) && known(w.in2) && !known(w.out)) {
        col.emplace(w.out, wye_apply(w.mode, col.at(w.in1), col.at(w.in2)));
        changed = true;
      }
    }
  }

  // consistency pass over fully-known equations
  for (size_t idx = 0; idx < m.interactions.size(); ++idx) {
    const auto& i = m.interactions[idx];
    if (!known(i.agent)) continue;
    for (const auto& p : i.patients) {
      if (!known(p.in) || !known(p.out)) continue;
      if (!(apply(i.op, col.at(p.in), col.at(i.agent)) == col.at(p.out)))
        return inconsistent("interaction " + std::to_string(idx) + ": register " +
                            std::to_string(p.out) + " violates " + op_str(i.op));
    }
  }
  for (size_t idx = 0; idx < m.wyes.size(); ++idx) {
    const auto& w = m.wyes[idx];
    if (!known(w.in1) || !known(w.in2) || !known(w.out)) continue;
    if (!(wye_apply(w.mode, col.at(w.in1), col.at(w.in2)) == col.at(w.out)))
      return inconsistent("wye " + std::to_string(idx) + ": register " +
                          std::to_string(w.out) + " violates the wye equation");
  }

  for (RegisterId r : m.registers)
    if (!known(r)) {
      res.status = ColouringStatus::Underdetermined;
      res.detail = "register " + std::to_string(r) + " has no derivable colour";
      return res;
    }
  res.status = ColouringStatus::Determined;
  return res;
}

std::vector<Colour> evaluate_io(const TangleMachine& m, const std::vector<Colour>& inputs) {
  if (inputs.size() != m.inputs.size())
    throw ColouringError("expected " + std::to_string(m.inputs.size()) + " inputs, got " +
                         std::to_string(inputs.size()));
  std::map<RegisterId, Colour> rho;
  for (size_t i = 0; i < inputs.size(); ++i) rho.emplace(m.inputs[i], inputs[i]);
  ColouringResult r = propagate(m, rho);
  if (r.status == ColouringStatus::Inconsistent)
    throw ColouringError("inconsistent colouring: " + r.detail);
  std::vector<Colour> out;
  for (RegisterId o : m.outputs) {
    auto it = r.colours.find(o);
    if (it == r.colours.end())
      throw ColouringError("underdetermined output register " + std::to_string(o));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace tangle

#include "tangle/algebra.hpp"

#include "tangle/rng.hpp"

#include <stdexcept>

namespace tangle {

std::string op_str(const OpLabel& op) {
  switch (op.kind) {
    case OpKind::Linear:
      return "lin(" + rat_str(op.s) + ")";
    case OpKind::Conj:
      return "conj";
    case OpKind::ConjInv:
      return "conj_inv";
    case OpKind::ConjGuarded:
      return "conjg";
    case OpKind::ConjGuardedInv:
      return "conjg_inv";
    case OpKind::Fox3:
      return "fox";
    case OpKind::Belief:
      return "bel";
  }
  return "";
}

std::optional<OpLabel> parse_op(std::string_view s) {
  if (s == "conj") return OpLabel{OpKind::Conj, 0};
  if (s == "conj_inv") return OpLabel{OpKind::ConjInv, 0};
  if (s == "conjg") return OpLabel{OpKind::ConjGuarded, 0};
  if (s == "conjg_inv") return OpLabel{OpKind::ConjGuardedInv, 0};
  if (s == "fox") return OpLabel{OpKind::Fox3, 0};
  if (s == "bel") return OpLabel{OpKind::Belief, 0};
  if (s.starts_with("lin(") && s.ends_with(")")) {
    auto r = parse_rat(s.substr(4, s.size() - 5));
    if (!r || *r == 1) return std::nullopt;
    return OpLabel{OpKind::Linear, *r};
  }
  return std::nullopt;
}

namespace {

template <typename M>
Colour conj_apply(const M& x, const M& y, bool guarded, bool inverse, const Rat& dy) {
  if (dy == 0) {
    if (guarded) return Colour(x);
    throw std::domain_error("conj by singular agent");
  }
  if constexpr (std::is_same_v<M, Mat2>) {
    return inverse ? Colour(y * x * inv2(y)) : Colour(inv2(y) * x * y);
  } else {
    return inverse ? Colour(y * x * inv4(y)) : Colour(inv4(y) * x * y);
  }
}

}  // namespace

Colour apply(const OpLabel& op, const Colour& x, const Colour& y) {
  if (x.kind() != y.kind()) throw KindMismatch("operands of different colour kinds");
  switch (op.kind) {
    case OpKind::Fox3:
      if (x.kind() != Colour::Kind::Fox3) throw KindMismatch("fox op needs Fox3 colours");
      return Colour::fox3(2 * y.fox() - x.fox());
    case OpKind::Linear: {
      if (op.s == 1) throw std::invalid_argument("Linear(1) is not invertible");
      switch (x.kind()) {
        case Colour::Kind::Rational:
          return Colour((1 - op.s) * x.rat() + op.s * y.rat());
        case Colour::Kind::Mat2:
          return Colour(x.m2().scale(1 - op.s) + y.m2().scale(op.s));
        case Colour::Kind::Mat4:
          return Colour(x.m4().scale(1 - op.s) + y.m4().scale(op.s));
        default:
          throw KindMismatch("linear op needs rational or matrix colours");
      }
    }
    case OpKind::Conj:
    case OpKind::ConjInv:
    case OpKind::ConjGuarded:
    case OpKind::ConjGuardedInv: {
      bool guarded = op.kind == OpKind::ConjGuarded || op.kind == OpKind::ConjGuardedInv;
      bool inverse = op.kind == OpKind::ConjInv || op.kind == OpKind::ConjGuardedInv;
      if (x.kind() == Colour::Kind::Mat2)
        return conj_apply(x.m2(), y.m2(), guarded, inverse, det2(y.m2()));
      if (x.kind() == Colour::Kind::Mat4)
        return conj_apply(x.m4(), y.m4(), guarded, inverse, det4(y.m4()));
      throw KindMismatch("conj ops need matrix colours");
    }
    case OpKind::Belief:
      throw std::invalid_argument("belief op has no carrier semantics; see beliefnet");
  }
  throw std::invalid_argument("unknown op");
}

OpLabel invert(const OpLabel& op) {
  switch (op.kind) {
    case OpKind::Linear:
      // (1-s')((1-s)x + sy) + s'y = x  =>  s' = s/(s-1)
      return OpLabel{OpKind::Linear, op.s / (op.s - 1)};
    case OpKind::Conj:
      return OpLabel{OpKind::ConjInv, 0};
    case OpKind::ConjInv:
      return OpLabel{OpKind::Conj, 0};
    case OpKind::ConjGuarded:
      return OpLabel{OpKind::ConjGuardedInv, 0};
    case OpKind::ConjGuardedInv:
      return OpLabel{OpKind::ConjGuarded, 0};
    case OpKind::Fox3:
      return op;  // involutive
    case OpKind::Belief:
      throw std::invalid_argument("belief op is not reversible");
  }
  throw std::invalid_argument("unknown op");
}

Quagma fox3_quandle() {
  return {"fox3", CarrierKind::Fox3, {OpLabel::fox3()}, StructureClass::Quandle};
}

Quagma linear_quandle(std::vector<Rat> params) {
  Quagma q{"linear", CarrierKind::Rational, {}, StructureClass::Quandle};
  for (auto& s : params) q.ops.push_back(OpLabel::linear(s));
  return q;
}

Quagma mixed_quagma() {
  return {"mixed2x2",
          CarrierKind::Matrix2,
          {OpLabel::linear(Rat(1, 2)), OpLabel::linear(Rat(2)), OpLabel::conj_guarded()},
          StructureClass::Quagma};
}

std::vector<Colour> sample_colours(CarrierKind carrier, int n, uint64_t seed,
                                   bool invertible_only) {
  std::vector<Colour> out;
  out.reserve(static_cast<size_t>(n));
  SplitMix rng(seed);
  auto small_rat = [&] {
    Int num = rng.range(-9, 9);
    Int den = rng.range(1, 9);
    return Rat(num, den);
  };
  while (static_cast<int>(out.size()) < n) {
    switch (carrier) {
      case CarrierKind::Fox3:
        out.push_back(Colour::fox3(static_cast<int>(rng.below(3))));
        break;
      case CarrierKind::Rational:
        out.push_back(Colour(small_rat()));
        break;
      case CarrierKind::Matrix2: {
        Mat2 m;
        for (int i = 0; i < 4; ++i) m.e[static_cast<size_t>(i)] = small_rat();
        if (invertible_only && det2(m) == 0) continue;
        out.push_back(Colour(m));
        break;
      }
    }
  }
  return out;
}

namespace {

struct TripleGen {
  // Exhaustive over all 27 Fox3 triples, seeded samples otherwise.
  std::vector<Colour> pool;
  bool exhaustive;
  long limit;

  TripleGen(CarrierKind carrier, const SampleBudget& b) {
    if (carrier == CarrierKind::Fox3) {
      for (int i = 0; i < 3; ++i) pool.push_back(Colour::fox3(i));
      exhaustive = true;
      limit = 27;
    } else {
      pool = sample_colours(carrier, 3 * b.samples, b.seed);
      exhaustive = false;
      limit = b.samples;
    }
  }

  template <typename F>
  bool for_each(F&& f) const {  // returns false if f reported a failure
    if (exhaustive) {
      for (const auto& x : pool)
        for (const auto& y : pool)
          for (const auto& z : pool)
            if (!f(x, y, z)) return false;
      return true;
    }
    for (long i = 0; i < limit; ++i)
      if (!f(pool[static_cast<size_t>(3 * i)], pool[static_cast<size_t>(3 * i + 1)],
             pool[static_cast<size_t>(3 * i + 2)]))
        return false;
    return true;
  }
};

bool distributive_triple(const OpLabel& b, const OpLabel& a, const Colour& x,
                         const Colour& u, const Colour& v, Colour* lhs_out,
                         Colour* rhs_out) {
  Colour lhs = apply(b, apply(a, x, u), v);
  Colour rhs = apply(a, apply(b, x, v), apply(b, u, v));
  if (lhs_out) *lhs_out = lhs;
  if (rhs_out) *rhs_out = rhs;
  return lhs == rhs;
}

}  // namespace

bool distributes_over(const OpLabel& b, const OpLabel& a, CarrierKind carrier,
                      SampleBudget budget) {
  TripleGen gen(carrier, budget);
  return gen.for_each([&](const Colour& x, const Colour& u, const Colour& v) {
    return distributive_triple(b, a, x, u, v, nullptr, nullptr);
  });
}

AxiomReport check_axioms(const Quagma& q, Axiom axiom, SampleBudget b) {
  AxiomReport rep;
  auto fail = [&](OpLabel o1, OpLabel o2, Colour x, Colour y, Colour z, Colour lhs,
                  Colour rhs) {
    rep.pass = false;
    rep.witness = AxiomWitness{o1, o2, std::move(x), std::move(y), std::move(z),
                               std::move(lhs), std::move(rhs)};
  };

  switch (axiom) {
    case Axiom::Idempotence: {
      auto pool = q.carrier == CarrierKind::Fox3
                      ? std::vector<Colour>{Colour::fox3(0), Colour::fox3(1), Colour::fox3(2)}
                      : sample_colours(q.carrier, b.samples, b.seed);
      for (const auto& op : q.ops)
        for (const auto& x : pool) {
          ++rep.checked;
          Colour lhs = apply(op, x, x);
          if (!(lhs == x)) {
            fail(op, op, x, x, x, lhs, x);
            return rep;
          }
        }
      return rep;
    }
    case Axiom::Reversibility: {
      auto pool = q.carrier == CarrierKind::Fox3
                      ? std::vector<Colour>{Colour::fox3(0), Colour::fox3(1), Colour::fox3(2)}
                      : sample_colours(q.carrier, 2 * b.samples, b.seed);
      for (const auto& op : q.ops) {
        OpLabel inv = invert(op);
        for (size_t i = 0; i + 1 < pool.size(); i += 2) {
          ++rep.checked;
          const Colour &x = pool[i], &y = pool[i + 1];
          Colour back = apply(inv, apply(op, x, y), y);
          if (!(back == x)) {
            fail(op, inv, x, y, y, back, x);
            return rep;
          }
        }
      }
      return rep;
    }
    case Axiom::SelfDistributivity: {
      for (const auto& op : q.ops) {
        TripleGen gen(q.carrier, b);
        bool ok = gen.for_each([&](const Colour& x, const Colour& y, const Colour& z) {
          ++rep.checked;
          Colour lhs, rhs;
          if (!distributive_triple(op, op, x, y, z, &lhs, &rhs)) {
            fail(op, op, x, y, z, lhs, rhs);
            return false;
          }
          return true;
        });
        if (!ok) return rep;
      }
      return rep;
    }
    case Axiom::MutualDistributivity: {
      for (const auto& a : q.ops)
        for (const auto& bb : q.ops) {
          TripleGen gen(q.carrier, b);
          bool ok = gen.for_each([&](const Colour& x, const Colour& u, const Colour& v) {
            ++rep.checked;
            Colour lhs, rhs;
            if (!distributive_triple(bb, a, x, u, v, &lhs, &rhs)) {
              fail(a, bb, x, u, v, lhs, rhs);
              return false;
            }
            return true;
          });
          if (!ok) return rep;
        }
      return rep;
    }
  }
  return rep;
}

}  // namespace tangle

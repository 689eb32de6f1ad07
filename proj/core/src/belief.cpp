#include "tangle/belief.hpp"

#include "tangle/rng.hpp"

#include <algorithm>
#include <cmath>

namespace tangle {

IPParams::IPParams(Rat c_, Rat s_, Rat dep_)
    : c(std::move(c_)), s(std::move(s_)), dep(std::move(dep_)) {
  if (!(0 < s && s < c && c <= 1))
    throw BeliefError("IPParams requires 0 < s < c <= 1");
  if (!(0 < dep && dep < 1)) throw BeliefError("IPParams requires delta in (0,1)");
}

Belief interact(const Belief& patient, const Belief& agent, const IPParams& p) {
  Rat ht = p.h_true(), hf = p.h_false();
  return {(1 - ht) * patient.a + ht * agent.a,
          (1 - hf) * patient.b + hf * agent.b};
}

namespace {

// Resolution order of interactions: forward only, error when stuck.
std::vector<size_t> forward_order(const TangleMachine& m) {
  if (!m.wyes.empty()) throw BeliefError("belief networks are wye-free");
  std::map<RegisterId, bool> known;
  for (const auto& [r, col] : m.constants) {
    if (col.kind() != Colour::Kind::Belief)
      throw BeliefError("register " + std::to_string(r) +
                        " carries a non-belief colour");
    known[r] = true;
  }
  std::vector<size_t> order;
  std::vector<char> done(m.interactions.size(), 0);
  size_t remaining = m.interactions.size();
  bool progress = true;
  while (remaining && progress) {
    progress = false;
    for (size_t i = 0; i < m.interactions.size(); ++i) {
      if (done[i]) continue;
      const auto& it = m.interactions[i];
      if (it.op.kind != OpKind::Belief)
        throw BeliefError("belief network interaction must use the 'bel' op");
      if (!known[it.agent]) continue;
      bool ready = true;
      for (const auto& pp : it.patients)
        if (!known[pp.in]) {
          ready = false;
          break;
        }
      if (!ready) continue;
      for (const auto& pp : it.patients) known[pp.out] = true;
      done[i] = 1;
      --remaining;
      order.push_back(i);
      progress = true;
    }
  }
  if (remaining)
    throw BeliefError("cyclic belief network has no forward evaluation order");
  return order;
}

}  // namespace

std::map<RegisterId, Belief> propagate_network(const BeliefNetwork& net,
                                               const IPParams& p) {
  const auto& m = net.m;
  validate(m);
  auto order = forward_order(m);
  std::map<RegisterId, Belief> out;
  for (const auto& [r, col] : m.constants) out[r] = col.bel();
  for (size_t i : order) {
    const auto& it = m.interactions[i];
    Belief agent = out.at(it.agent);
    for (const auto& pp : it.patients) out[pp.out] = interact(out.at(pp.in), agent, p);
  }
  return out;
}

bool decides(const Belief& bel, const Rat& kappa, unsigned word_len) {
  if (kappa <= 0) throw BeliefError("decides requires kappa > 0");
  if (word_len == 0) throw BeliefError("decides requires word_len >= 1");
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  unsigned p = numerator(kappa).convert_to<unsigned>();
  unsigned q = denominator(kappa).convert_to<unsigned>();
  auto track = [&](const Rat& coeff) {
    Rat t = coeff - Rat(1, 2);
    if (t <= 0) return false;
    // t >= word_len^(-p/q)  <=>  t^q * word_len^p >= 1 (all terms positive)
    return rat_pow(t, q) * rat_pow(Rat(word_len), p) >= 1;
  };
  return track(bel.a) && track(bel.b);
}

BeliefNetwork ladder_network(int chi) {
  if (chi < 1) throw BeliefError("ladder_network requires chi >= 1");
  MachineBuilder b("ladder", "belief");
  RegisterId w = b.constant(Colour(Belief{0, 1}));  // <False>
  b.label(w, "W0");
  std::vector<RegisterId> v(static_cast<size_t>(chi));
  for (int i = 1; i <= chi; ++i) {
    Belief init = i == chi ? Belief{1, 0} : Belief{Rat(1, 2), Rat(1, 2)};
    v[static_cast<size_t>(i - 1)] = b.constant(Colour(init));
    b.label(v[static_cast<size_t>(i - 1)], "V" + std::to_string(i));
  }
  for (int k = 1; k <= chi; ++k) {
    RegisterId agent = v[static_cast<size_t>(k - 1)];
    w = b.interact(agent, OpLabel::belief(), w);
    b.label(w, "W" + std::to_string(k));
    size_t idx = b.peek().interactions.size() - 1;
    // earlier agents continue under this one; these crossings carry no
    // information into W but give the braid its R3 sites
    for (int i = 1; i < k; ++i) {
      RegisterId nv = b.fresh();
      b.add_patient(idx, v[static_cast<size_t>(i - 1)], nv);
      v[static_cast<size_t>(i - 1)] = nv;
    }
  }
  b.mark_output(w);
  BeliefNetwork net{b.take(), w};
  validate(net.m);
  return net;
}

Belief ladder_closed_form(int chi, const IPParams& p) {
  if (chi < 1) throw BeliefError("ladder_closed_form requires chi >= 1");
  unsigned x = static_cast<unsigned>(chi);
  Rat ht = p.h_true(), hf = p.h_false();
  Rat dt = rat_pow(1 - ht, x), df = rat_pow(1 - hf, x);
  return {(1 - ht - dt) / 2 + ht, df + (1 - hf - df) / 2};
}

bool chi_admissible(int chi, const IPParams& p) {
  if (chi < 1) return false;
  unsigned x = static_cast<unsigned>(chi);
  return rat_pow(1 - p.h_true(), x) < p.h_true() &&
         rat_pow(1 - p.h_false(), x) > p.h_false();
}

ChiBounds chi_bounds(const IPParams& p) {
  double ht = rat_double(p.h_true()), hf = rat_double(p.h_false());
  ChiBounds b;
  b.exact_lo = std::log(ht) / std::log(1 - ht);
  b.exact_hi = std::log(hf) / std::log(1 - hf);
  auto I = [](double x) { return -std::log(x) / x; };
  b.stated_lo = I(ht);
  b.stated_hi = 1 / I(1 - hf);
  int cap = static_cast<int>(std::ceil(b.exact_hi)) + 2;
  for (int chi = 1; chi <= cap && !b.integer_in_exact; ++chi)
    b.integer_in_exact = chi_admissible(chi, p);
  return b;
}

BeliefPair hopf_chernoff_step(const Belief& in1, const Belief& in2,
                              const Belief& alpha, const Belief& beta,
                              const Rat& h_a, const Rat& h_b) {
  auto track = [](const Rat& h, const Rat& i1, const Rat& i2, const Rat& al,
                  const Rat& be) {
    Rat g = 1 - h;
    return std::pair<Rat, Rat>{g * g * i1 + h * g * i2 + h * g * al + h * h * be,
                               h * g * i1 + g * g * i2 + h * h * al + h * g * be};
  };
  auto [a1, a2] = track(h_a, in1.a, in2.a, alpha.a, beta.a);
  auto [b1, b2] = track(h_b, in1.b, in2.b, alpha.b, beta.b);
  return {{a1, b1}, {a2, b2}};
}

BeliefPair hopf_chernoff_step(const Belief& in1, const Belief& in2,
                              const Belief& alpha, const Belief& beta,
                              const IPParams& p) {
  return hopf_chernoff_step(in1, in2, alpha, beta, p.h_true(), p.h_false());
}

BeliefPair hopf_chernoff_steady(const Belief& alpha, const Belief& beta,
                                const Rat& h_a, const Rat& h_b) {
  if (h_a == 0 || h_b == 0)
    throw BeliefError("steady state is not unique at h = 0");
  auto track = [](const Rat& h, const Rat& al, const Rat& be) {
    Rat d = 3 - 2 * h;
    return std::pair<Rat, Rat>{(2 * (1 - h) * al + be) / d,
                               (al + 2 * (1 - h) * be) / d};
  };
  auto [a1, a2] = track(h_a, alpha.a, beta.a);
  auto [b1, b2] = track(h_b, alpha.b, beta.b);
  return {{a1, b1}, {a2, b2}};
}

BeliefPair hopf_chernoff_steady(const Belief& alpha, const Belief& beta,
                                const IPParams& p) {
  return hopf_chernoff_steady(alpha, beta, p.h_true(), p.h_false());
}

std::pair<Belief, Belief> hopf_chernoff_beliefs(const Rat& c, const Rat& eps,
                                                const Rat& dep) {
  if (!(0 < eps && eps < c && c <= 1) || !(0 < dep && dep < 1))
    throw BeliefError("hopf_chernoff_beliefs requires 0 < eps < c <= 1, delta in (0,1)");
  Rat sigma = eps * dep / 12;
  Belief alpha{Rat(1, 4) + sigma, Rat(3, 4) - sigma};
  Belief beta{1 - c * dep / 2 + sigma, c * dep / 2 - sigma};
  for (const Rat& x : {alpha.a, alpha.b, beta.a, beta.b})
    if (x < 0 || x > 1) throw BeliefError("belief coefficient outside [0,1]");
  return {alpha, beta};
}

int hopf_chernoff_iterations(const Rat& eps, const Rat& dep, const Rat& c) {
  if (!(0 < eps && eps < c && c <= 1) || !(0 < dep && dep < 1))
    throw BeliefError("hopf_chernoff_iterations: illegal parameters");
  Rat h_min = std::min(Rat(c * dep), Rat((c - eps) * dep));
  Rat target = eps * dep / 24;
  Rat decay = 1 - h_min;
  Rat pow = decay;
  int chi = 1;
  while (pow > target) {
    pow *= decay;
    ++chi;
  }
  return chi;
}

double pcp_run(const IPParams& p, bool membership, long trials, uint64_t seed) {
  if (trials < 1) throw BeliefError("pcp_run requires trials >= 1");
  double h = rat_double(membership ? p.h_true() : p.h_false());
  int chi = hopf_chernoff_iterations(p.c - p.s, p.dep, p.c);
  long accepts = 0;
  for (long t = 0; t < trials; ++t) {
    SplitMix rng(substream(seed, static_cast<uint64_t>(t)));
    bool alpha = rng.below(2) == 1;
    bool r1 = true, r2 = false;  // In1 = <True>, In2 = <False>
    for (int i = 0; i < chi; ++i) {
      bool w = rng.unit() < h ? alpha : r1;
      bool u = rng.unit() < h ? !alpha : r2;
      bool n1 = rng.unit() < h ? u : w;
      bool n2 = rng.unit() < h ? w : u;
      r1 = n1;
      r2 = n2;
    }
    if (r1 == !alpha) ++accepts;
  }
  return static_cast<double>(accepts) / static_cast<double>(trials);
}

Rat soundness_bound(const Rat& s) {
  if (!(0 < s && s < 1)) throw BeliefError("soundness_bound requires s in (0,1)");
  return Rat(1) / (3 - 2 * s);
}

MCReport mc_simulate(const BeliefNetwork& net, const IPParams& p,
                     bool membership, long trials, uint64_t seed) {
  if (trials < 1) throw BeliefError("mc_simulate requires trials >= 1");
  const auto& m = net.m;
  validate(m);
  auto order = forward_order(m);
  double h = rat_double(membership ? p.h_true() : p.h_false());

  // initial True-probabilities per the active track
  std::map<RegisterId, double> init;
  for (const auto& [r, col] : m.constants) {
    const Belief& b = col.bel();
    init[r] = membership ? rat_double(b.a) : 1 - rat_double(b.b);
  }

  std::map<RegisterId, long> trues;
  for (RegisterId r : m.registers) trues[r] = 0;
  MCReport rep;
  rep.trials = trials;
  for (long t = 0; t < trials; ++t) {
    SplitMix rng(substream(seed, static_cast<uint64_t>(t)));
    std::map<RegisterId, bool> real;
    for (const auto& [r, pr] : init) real[r] = rng.unit() < pr;
    for (size_t i : order) {
      const auto& it = m.interactions[i];
      bool agent = real.at(it.agent);  // one realization, all patients
      for (const auto& pp : it.patients)
        real[pp.out] = rng.unit() < h ? agent : real.at(pp.in);
    }
    for (const auto& [r, v] : real)
      if (v) ++trues[r];
    std::vector<bool> outs;
    outs.reserve(m.outputs.size());
    for (RegisterId r : m.outputs) outs.push_back(real.at(r));
    ++rep.joint[outs];
  }
  for (const auto& [r, n] : trues)
    rep.freq[r] = static_cast<double>(n) / static_cast<double>(trials);
  return rep;
}

}  // namespace tangle

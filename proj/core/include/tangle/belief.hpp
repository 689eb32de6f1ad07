#pragma once

#include "tangle/diagram.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace tangle {

struct BeliefError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deformed-IP parameters. True-coefficients evolve with h = c*delta,
// False-coefficients with h = s*delta (dual-track: one pass computes both
// the in-language and the not-in-language branch).
struct IPParams {
  Rat c, s, dep;

  IPParams(Rat c_, Rat s_, Rat dep_);

  Rat h_true() const { return c * dep; }
  Rat h_false() const { return s * dep; }
};

// Single belief update: patient under agent, (1-h)*patient + h*agent
// per track.
Belief interact(const Belief& patient, const Belief& agent, const IPParams& p);

// A wye-free tangle machine whose interactions all carry the 'bel' op and
// whose initial beliefs live in m.constants as belief colours.
struct BeliefNetwork {
  TangleMachine m;
  RegisterId deciding = 0;
};

// Forward evaluation only; beliefs admit no backward inference. Cyclic
// networks (anything without a forward order) raise BeliefError.
std::map<RegisterId, Belief> propagate_network(const BeliefNetwork& net,
                                               const IPParams& p);

// Both tracks must clear 1/2 + word_len^(-kappa); compared exactly.
bool decides(const Belief& bel, const Rat& kappa, unsigned word_len);

// Theorem-proving ladder: W starts at <False> and passes under agents
// V^1..V^chi, meeting V^chi = <True> last; intermediate agents are
// 1/2<False> + 1/2<True>. Each V^i also passes under the later agents,
// which is what gives the braid its slide moves. Deciding register is
// the final W.
BeliefNetwork ladder_network(int chi);

// Closed form of the ladder output:
//   a = [1 - h - (1-h)^chi]/2 + h          at h = c*delta
//   b = (1-h)^chi + [1 - h - (1-h)^chi]/2  at h = s*delta
Belief ladder_closed_form(int chi, const IPParams& p);

// The operative interval for chi is exact_lo < chi < exact_hi with
//   exact_lo = log(c*delta)/log(1-c*delta), exact_hi = log(s*delta)/log(1-s*delta),
// equivalent to the exact conditions (1-c*delta)^chi < c*delta and
// (1-s*delta)^chi > s*delta. The stated interval (I(c*delta), 1/I(1-s*delta))
// with I(p) = -log(p)/p is reported informationally (natural log; see
// chi_bounds_containment note in tests).
struct ChiBounds {
  double exact_lo = 0, exact_hi = 0;
  double stated_lo = 0, stated_hi = 0;
  bool integer_in_exact = false;
};
ChiBounds chi_bounds(const IPParams& p);

// Exact-rational membership of chi in the operative interval.
bool chi_admissible(int chi, const IPParams& p);

struct BeliefPair {
  Belief out1, out2;
  bool operator==(const BeliefPair&) const = default;
};

// One Hopf-Chernoff submachine, out = A(h)*in + B(h)*(alpha,beta) per track;
// the raw-h overloads exist because h=0 and h=1 are unreachable through
// legal IPParams but are the natural boundary checks.
BeliefPair hopf_chernoff_step(const Belief& in1, const Belief& in2,
                              const Belief& alpha, const Belief& beta,
                              const Rat& h_a, const Rat& h_b);
BeliefPair hopf_chernoff_step(const Belief& in1, const Belief& in2,
                              const Belief& alpha, const Belief& beta,
                              const IPParams& p);

// Steady state out1 = (2(1-h)alpha + beta)/(3-2h), out2 symmetric; h = 0
// has no unique steady state and raises BeliefError.
BeliefPair hopf_chernoff_steady(const Belief& alpha, const Belief& beta,
                                const Rat& h_a, const Rat& h_b);
BeliefPair hopf_chernoff_steady(const Belief& alpha, const Belief& beta,
                                const IPParams& p);

// The agent beliefs that centre the steady state on 1/2 +- eps*delta/12:
//   alpha = (1/4 + eps*delta/12)<True> + (3/4 - eps*delta/12)<False>
//   beta  = (1 - c*delta/2 + eps*delta/12)<True> + (c*delta/2 - eps*delta/12)<False>
std::pair<Belief, Belief> hopf_chernoff_beliefs(const Rat& c, const Rat& eps,
                                                const Rat& dep);

// Smallest chi with (1 - h_min)^chi <= eps*delta/24, h_min = min(c,c-eps)*delta.
// The target eps*delta/24 is half the decision margin sigma = eps*delta/12:
// once the iteration error drops below half the margin, the sign of the
// decision can no longer flip. The asymptotic order is log(1/eps).
int hopf_chernoff_iterations(const Rat& eps, const Rat& dep, const Rat& c);

// Certificate-level Monte Carlo of the deformed PCP protocol: per run, a
// fair bit alpha colours the top agent and its negation the bottom one;
// each interaction adopts the agent realization with probability h (h =
// c*delta when the word is in the language, s*delta otherwise, folding the
// oracle's accept probability into the channel); the run accepts when the
// final Out1 realization equals not-alpha. Deterministic in (inputs, seed)
// regardless of worker count: trial t uses substream(seed, t).
double pcp_run(const IPParams& p, bool membership, long trials, uint64_t seed);

// Theorem bound on Pr(accept | not in L) as delta -> 1.
Rat soundness_bound(const Rat& s);

struct MCReport {
  long trials = 0;
  std::map<RegisterId, double> freq;        // empirical Pr(realization = True)
  std::map<std::vector<bool>, long> joint;  // S_out realizations, declared order
};

// Samples realizations of a belief network: initial registers draw True with
// probability a (membership) or 1-b (otherwise); an agent holds one
// realization per time-frame, shared across its patients, while each patient
// flips its own independent acceptance coin.
MCReport mc_simulate(const BeliefNetwork& net, const IPParams& p,
                     bool membership, long trials, uint64_t seed);

}  // namespace tangle

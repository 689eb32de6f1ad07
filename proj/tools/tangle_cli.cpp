#include "tangle/belief.hpp"
#include "tangle/gates.hpp"
#include "tangle/rewrite.hpp"
#include "tangle/turing.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tangle;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::vector<std::string> pos;
  std::map<std::string, std::string> opt;
  std::set<std::string> flag;

  bool has(const std::string& k) const { return opt.count(k) || flag.count(k); }
  std::string get(const std::string& k) const {
    auto it = opt.find(k);
    if (it == opt.end()) throw UsageError("missing required option --" + k);
    return it->second;
  }
  std::string get_or(const std::string& k, const std::string& d) const {
    auto it = opt.find(k);
    return it == opt.end() ? d : it->second;
  }
};

const std::set<std::string> kBoolFlags = {
    "help", "float", "closed", "list", "member", "nonmember", "reference"};

Args parse_args(int argc, char** argv, int from,
                const std::set<std::string>& allowed) {
  Args a;
  for (int i = from; i < argc; ++i) {
    std::string t = argv[i];
    if (t.rfind("--", 0) != 0) {
      a.pos.push_back(t);
      continue;
    }
    std::string name = t.substr(2);
    if (!allowed.count(name)) throw UsageError("unknown option --" + name);
    if (kBoolFlags.count(name)) {
      a.flag.insert(name);
    } else {
      if (i + 1 >= argc) throw UsageError("option --" + name + " needs a value");
      a.opt[name] = argv[++i];
    }
  }
  return a;
}

Rat parse_rat(const std::string& s) {
  auto c = parse_colour(s);
  if (!c || c->kind() != Colour::Kind::Rational)
    throw UsageError("expected a rational, got '" + s + "'");
  return c->rat();
}

long parse_long(const std::string& s) {
  size_t used = 0;
  long v = std::stol(s, &used);
  if (used != s.size()) throw UsageError("expected an integer, got '" + s + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Quagma quagma_by_name(const std::string& name) {
  if (name == "fox3") return fox3_quandle();
  if (name == "linear") return linear_quandle();
  if (name == "mixed2x2") return mixed_quagma();
  if (name == "belief") return belief_quagma();
  throw UsageError("unknown quagma '" + name +
                   "' (expected fox3|linear|mixed2x2|belief)");
}

// output rendering: --format kv for scripts, plain prose otherwise
struct Out {
  bool kv = false;
  bool flt = false;

  std::string num(const Rat& r) const {
    if (!flt) return rat_str(r);
    std::ostringstream ss;
    ss.precision(12);
    ss << r.convert_to<double>();
    return ss.str();
  }
  void line(const std::string& key, const std::string& val) const {
    if (kv)
      std::cout << key << "=" << val << "\n";
    else
      std::cout << key << ": " << val << "\n";
  }
};

// named bit colours so gate machines can be driven from the command line
Colour parse_input_colour(const std::string& tok) {
  if (tok == "A0") return encode_bit(false, Backend::Quagma);
  if (tok == "A1") return encode_bit(true, Backend::Quagma);
  if (tok == "f0") return encode_bit(false, Backend::Fox3);
  if (tok == "f1") return encode_bit(true, Backend::Fox3);
  auto c = parse_colour(tok);
  if (!c) throw UsageError("cannot parse colour '" + tok + "'");
  return *c;
}

std::string show_colour(const Colour& c, const Out& out) {
  if (c == encode_bit(false, Backend::Quagma)) return "A0";
  if (c == encode_bit(true, Backend::Quagma)) return "A1";
  if (c.kind() == Colour::Kind::Rational) return out.num(c.rat());
  return colour_str(c);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

uint64_t need_seed(const Args& a, const Out& out) {
  if (a.opt.count("seed")) {
    uint64_t s = static_cast<uint64_t>(parse_long(a.get("seed")));
    out.line("seed", std::to_string(s));
    return s;
  }
  if (const char* env = std::getenv("TANGLE_SEED")) {
    uint64_t s = static_cast<uint64_t>(parse_long(env));
    out.line("seed", std::to_string(s));
    return s;
  }
  throw UsageError("Monte-Carlo subcommands require --seed (or TANGLE_SEED)");
}

int parse_jobs(const Args& a) {
  int jobs = static_cast<int>(parse_long(a.get_or("jobs", "1")));
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
  return jobs;
}

const std::map<std::string, std::string> kHelp = {
    {"axioms",
     "usage: tangle axioms --quagma NAME [--samples N] [--seed N] [--format kv]\n"
     "Check idempotence, reversibility, self- and mutual distributivity for a\n"
     "named quagma (fox3|linear|mixed2x2) and report which axioms hold.\n"
     "  --quagma NAME   carrier and op set to test\n"
     "  --samples N     sampled triples per op pair (default 500)\n"
     "  --seed N        sampling seed (default 1)\n"
     "  --format kv     machine-readable key=value output\n"},
    {"eval",
     "usage: tangle eval --machine FILE --quagma NAME --inputs C1,C2,...\n"
     "               [--format kv] [--float]\n"
     "Propagate input colours through a tangle machine and print the output\n"
     "colours. Bits may be written A0/A1 (2x2-matrix backend) or f0/f1 (Fox-3).\n"
     "Exit 1 with 'computation cannot take place' if outputs stay undetermined.\n"
     "  --machine FILE  serialized tangle machine\n"
     "  --quagma NAME   fox3|linear|mixed2x2|belief\n"
     "  --inputs LIST   comma-separated input colours in S_in order\n"
     "  --float         render rationals as decimals\n"},
    {"compile-circuit",
     "usage: tangle compile-circuit --circuit FILE --backend NAME [-o FILE]\n"
     "Lower a boolean circuit (NOT/AND/OR/FANOUT text format) to one tangle\n"
     "machine and print its canonical serialization.\n"
     "  --circuit FILE  circuit description\n"
     "  --backend NAME  fox3|quagma\n"
     "  --out FILE      write the machine here instead of stdout\n"},
    {"compile-tm",
     "usage: tangle compile-tm --tm FILE --tape-len M --steps N [--closed]\n"
     "Compile a 3-symbol Turing machine into a tangle machine over a fixed\n"
     "tape window, printing the serialized machine and its op count.\n"
     "  --tm FILE       transition table (states/delta text format)\n"
     "  --tape-len M    tape window length\n"
     "  --steps N       hardwired step count\n"
     "  --closed        splice final configuration back onto the initial one\n"},
    {"run-tm",
     "usage: tangle run-tm --tm FILE --tape-len M --steps N --tape SYMS\n"
     "              [--state Q] [--head P] [--reference] [--format kv]\n"
     "Run a Turing machine for N steps and print the (state, head, tape)\n"
     "trajectory. By default the compiled tangle machine is evaluated; with\n"
     "--reference the plain interpreter is used instead.\n"
     "  --tape SYMS     initial tape, e.g. 0110 (symbols 0|1|2)\n"
     "  --state Q       initial state (default q0 from the spec)\n"
     "  --head P        initial head position, 1-based (default 1)\n"},
    {"braidip",
     "usage: tangle braidip ladder --chi N --c R --s R --delta R\n"
     "               [--format kv] [--float]\n"
     "Evaluate the deformed-IP ladder: chi interactions pulling an initial\n"
     "<False> belief towards <True>. Prints both conditional coefficients and\n"
     "whether the exact chi-interval admits this chi.\n"
     "  --chi N         number of ladder interactions\n"
     "  --c R --s R     completeness and soundness (0 < s < c <= 1)\n"
     "  --delta R       deformation parameter in (0,1)\n"},
    {"hopf-chernoff",
     "usage: tangle hopf-chernoff --c R --eps R --delta R [--format kv] [--float]\n"
     "Steady state of the recursive two-strand belief network with the paper's\n"
     "alpha/beta inputs, plus the iteration count needed to get within\n"
     "eps*delta/24 of it.\n"
     "  --c R           completeness; soundness is c - eps\n"
     "  --eps R         completeness-soundness gap\n"
     "  --delta R       deformation parameter in (0,1)\n"},
    {"pcp-run",
     "usage: tangle pcp-run --s R --delta R --trials N --seed N\n"
     "              [--c R] [--member|--nonmember] [--jobs N] [--format kv]\n"
     "Certificate-level Monte-Carlo of the deformed one-round protocol.\n"
     "Prints the accept rate and the soundness bound 1/(3-2s).\n"
     "  --s R           soundness parameter\n"
     "  --c R           completeness parameter (default 1)\n"
     "  --delta R       deformation parameter in (0,1)\n"
     "  --trials N      Monte-Carlo trials\n"
     "  --seed N        RNG seed (required; TANGLE_SEED is the fallback)\n"
     "  --member        simulate x in L (default: not in L)\n"
     "  --nonmember     simulate x not in L\n"
     "  --jobs N        worker count for trials\n"},
    {"rewrite",
     "usage: tangle rewrite --machine FILE --quagma NAME\n"
     "               (--list | --script FILE | --explore MOVES [--max M] [--jobs N])\n"
     "Reidemeister-move engine. --list prints every applicable move as\n"
     "'move KIND at SITE'; --script applies such lines in order and prints the\n"
     "rewritten machine; --explore prints the bounded equivalence closure.\n"
     "  --list          enumerate applicable (move, site) pairs\n"
     "  --script FILE   move script, one 'move KIND at SITE' per line\n"
     "  --explore N     breadth-first closure up to N moves\n"
     "  --max M         cap on machines explored (default 64)\n"
     "  --jobs N        worker count for exploration\n"},
    {"zk-check",
     "usage: tangle zk-check --machine FILE --c R --s R --delta R\n"
     "               [--kappa R] [--word-len N] [--budget N] [--format kv]\n"
     "Decide whether a belief network is a zero-knowledge machine: it must\n"
     "decide at its last output, leak nothing at intermediates, and have an\n"
     "R3-equivalent form that does decide at an intermediate.\n"
     "Exit 1 if the network does not decide at all.\n"
     "  --machine FILE  belief-quagma tangle machine (last output decides)\n"
     "  --kappa R       decision exponent (default 1)\n"
     "  --word-len N    word length for the threshold (default 32)\n"
     "  --budget N      max move depth for the equivalence search (default 2)\n"},
    {"export-dot",
     "usage: tangle export-dot --machine FILE\n"
     "Emit the machine as a Graphviz digraph: solid edges follow patient\n"
     "strands, dashed edges connect agents to the registers they update,\n"
     "box nodes are wyes.\n"
     "  --machine FILE  serialized tangle machine\n"},
};

const std::set<std::string> kSubcommands = {
    "axioms",   "eval",    "compile-circuit", "compile-tm",
    "run-tm",   "braidip", "hopf-chernoff",   "pcp-run",
    "rewrite",  "zk-check", "export-dot"};

Out make_out(const Args& a) {
  Out o;
  std::string f = a.get_or("format", "text");
  if (f != "text" && f != "kv") throw UsageError("unknown --format '" + f + "'");
  o.kv = f == "kv";
  o.flt = a.flag.count("float") > 0;
  return o;
}

int cmd_axioms(const Args& a) {
  Out out = make_out(a);
  Quagma q = quagma_by_name(a.get("quagma"));
  SampleBudget b{static_cast<uint64_t>(parse_long(a.get_or("seed", "1"))),
                 static_cast<int>(parse_long(a.get_or("samples", "500")))};
  const std::pair<Axiom, const char*> axioms[] = {
      {Axiom::Idempotence, "idempotence"},
      {Axiom::Reversibility, "reversibility"},
      {Axiom::SelfDistributivity, "self_distributivity"},
      {Axiom::MutualDistributivity, "mutual_distributivity"},
  };
  for (auto [ax, name] : axioms) {
    AxiomReport r = check_axioms(q, ax, b);
    out.line(name, r.pass ? "holds" : "fails");
  }
  return 0;
}

int cmd_eval(const Args& a) {
  Out out = make_out(a);
  TangleMachine m = parse_machine(read_file(a.get("machine")));
  quagma_by_name(a.get("quagma"));  // validated; evaluation is op-driven
  std::vector<Colour> inputs;
  if (a.opt.count("inputs") && !a.get("inputs").empty())
    for (const auto& tok : split(a.get("inputs"), ','))
      inputs.push_back(parse_input_colour(tok));
  std::vector<Colour> outs;
  try {
    outs = evaluate_io(m, inputs);
  } catch (const ColouringError& e) {
    throw DomainError(std::string("computation cannot take place: ") + e.what());
  }
  for (size_t i = 0; i < outs.size(); ++i)
    out.line("out" + std::to_string(i), show_colour(outs[i], out));
  return 0;
}

int cmd_compile_circuit(const Args& a) {
  std::string backend = a.get("backend");
  Backend be;
  if (backend == "fox3")
    be = Backend::Fox3;
  else if (backend == "quagma")
    be = Backend::Quagma;
  else
    throw UsageError("unknown backend '" + backend + "' (fox3|quagma)");
  Circuit c = parse_circuit(read_file(a.get("circuit")));
  TangleMachine m = compile_circuit(c, be);
  std::string text = serialize(m);
  if (a.opt.count("out")) {
    std::ofstream f(a.get("out"));
    f << text;
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_compile_tm(const Args& a) {
  TMSpec spec = parse_tm(read_file(a.get("tm")));
  CompiledTM ct = compile_tm(spec, static_cast<int>(parse_long(a.get("tape-len"))),
                             static_cast<int>(parse_long(a.get("steps"))),
                             a.flag.count("closed") > 0);
  std::cout << "# op_count " << op_count(ct.m) << "\n";
  std::cout << serialize(ct.m);
  return 0;
}

int cmd_run_tm(const Args& a) {
  Out out = make_out(a);
  TMSpec spec = parse_tm(read_file(a.get("tm")));
  int steps = static_cast<int>(parse_long(a.get("steps")));
  TMConfig start;
  start.q = static_cast<int>(parse_long(a.get_or("state", std::to_string(spec.q0))));
  start.p = static_cast<int>(parse_long(a.get_or("head", "1")));
  for (char ch : a.get("tape")) {
    if (ch < '0' || ch > '2') throw UsageError("tape symbols must be 0|1|2");
    start.tape.push_back(ch - '0');
  }
  int tape_len = static_cast<int>(parse_long(
      a.get_or("tape-len", std::to_string(start.tape.size()))));
  if (static_cast<int>(start.tape.size()) != tape_len)
    throw UsageError("--tape length must equal --tape-len");
  std::vector<TMConfig> traj;
  try {
    if (a.flag.count("reference")) {
      traj = reference_run(spec, start, steps);
    } else {
      CompiledTM ct = compile_tm(spec, tape_len, steps);
      traj = run_compiled(ct, start);
    }
  } catch (const std::exception& e) {
    throw DomainError(e.what());
  }
  for (size_t k = 0; k < traj.size(); ++k) {
    std::string tape;
    for (int s : traj[k].tape) tape += static_cast<char>('0' + s);
    std::ostringstream v;
    v << "q" << traj[k].q << " p" << traj[k].p << " " << tape;
    out.line("step" + std::to_string(k), v.str());
  }
  return 0;
}

int cmd_braidip(const Args& a) {
  Out out = make_out(a);
  if (a.pos.size() != 1 || a.pos[0] != "ladder")
    throw UsageError("braidip expects the mode 'ladder'");
  int chi = static_cast<int>(parse_long(a.get("chi")));
  IPParams p{parse_rat(a.get("c")), parse_rat(a.get("s")),
             parse_rat(a.get("delta"))};
  Belief b = ladder_closed_form(chi, p);
  BeliefNetwork net = ladder_network(chi);
  Belief prop = propagate_network(net, p).at(net.deciding);
  if (!(b == prop)) throw DomainError("closed form disagrees with propagation");
  out.line("true_coeff", out.num(b.a));
  out.line("false_coeff", out.num(b.b));
  out.line("chi_admissible", chi_admissible(chi, p) ? "yes" : "no");
  return 0;
}

int cmd_hopf_chernoff(const Args& a) {
  Out out = make_out(a);
  Rat c = parse_rat(a.get("c"));
  Rat eps = parse_rat(a.get("eps"));
  Rat dep = parse_rat(a.get("delta"));
  auto [alpha, beta] = hopf_chernoff_beliefs(c, eps, dep);
  IPParams p{c, c - eps, dep};
  BeliefPair steady = hopf_chernoff_steady(alpha, beta, p);
  out.line("alpha", out.num(alpha.a) + "|" + out.num(alpha.b));
  out.line("beta", out.num(beta.a) + "|" + out.num(beta.b));
  out.line("out1", out.num(steady.out1.a) + "|" + out.num(steady.out1.b));
  out.line("out2", out.num(steady.out2.a) + "|" + out.num(steady.out2.b));
  out.line("iterations", std::to_string(hopf_chernoff_iterations(eps, dep, c)));
  return 0;
}

int cmd_pcp_run(const Args& a) {
  Out out = make_out(a);
  uint64_t seed = need_seed(a, out);
  parse_jobs(a);  // trials use decorrelated substreams, order-independent
  Rat s = parse_rat(a.get("s"));
  Rat c = parse_rat(a.get_or("c", "1"));
  Rat dep = parse_rat(a.get("delta"));
  long trials = parse_long(a.get("trials"));
  if (a.flag.count("member") && a.flag.count("nonmember"))
    throw UsageError("--member and --nonmember are mutually exclusive");
  bool member = a.flag.count("member") > 0;
  IPParams p{c, s, dep};
  double rate = pcp_run(p, member, trials, seed);
  std::ostringstream r;
  r.precision(12);
  r << rate;
  out.line("membership", member ? "in_L" : "not_in_L");
  out.line("accept_rate", r.str());
  out.line("soundness_bound", out.num(soundness_bound(s)));
  return 0;
}

int cmd_rewrite(const Args& a) {
  Out out = make_out(a);
  TangleMachine m = parse_machine(read_file(a.get("machine")));
  Quagma q = quagma_by_name(a.get("quagma"));
  int modes = (a.flag.count("list") ? 1 : 0) + (a.opt.count("script") ? 1 : 0) +
              (a.opt.count("explore") ? 1 : 0);
  if (modes != 1)
    throw UsageError("rewrite needs exactly one of --list, --script, --explore");
  if (a.flag.count("list")) {
    for (const auto& [mv, site] : find_moves(m, q))
      std::cout << "move " << move_str(mv) << " at " << site_str(site) << "\n";
    return 0;
  }
  if (a.opt.count("explore")) {
    parse_jobs(a);  // merge is deterministic either way (sorted canonical forms)
    size_t cap = static_cast<size_t>(parse_long(a.get_or("max", "64")));
    auto set = explore_equivalents(
        m, q, static_cast<int>(parse_long(a.get("explore"))), cap);
    out.line("machines", std::to_string(set.size()));
    for (const auto& v : set) std::cout << "\n" << serialize(v);
    return 0;
  }
  // script mode: lines 'move KIND at SITE', matched against find_moves
  TangleMachine cur = canonicalize(m);
  std::istringstream script(read_file(a.get("script")));
  std::string lnbuf;
  int lineno = 0;
  while (std::getline(script, lnbuf)) {
    ++lineno;
    if (lnbuf.empty() || lnbuf[0] == '#') continue;
    std::istringstream ls(lnbuf);
    std::string kw, mvtxt, at, sitetxt;
    ls >> kw >> mvtxt >> at >> sitetxt;
    if (kw != "move" || at != "at")
      throw UsageError("script line " + std::to_string(lineno) +
                       ": expected 'move KIND at SITE'");
    bool applied = false;
    for (const auto& [mv, site] : find_moves(cur, q)) {
      if (move_str(mv) == mvtxt && site_str(site) == sitetxt) {
        cur = apply_move(cur, q, mv, site);
        applied = true;
        break;
      }
    }
    if (!applied)
      throw DomainError("script line " + std::to_string(lineno) + ": move " +
                        mvtxt + " at " + sitetxt + " is not applicable");
  }
  std::cout << serialize(cur);
  return 0;
}

int cmd_zk_check(const Args& a) {
  Out out = make_out(a);
  TangleMachine m = parse_machine(read_file(a.get("machine")));
  if (m.outputs.empty()) throw DomainError("machine has no output register");
  BeliefNetwork net{m, m.outputs.back()};
  IPParams p{parse_rat(a.get("c")), parse_rat(a.get("s")),
             parse_rat(a.get("delta"))};
  ZkVerdict v = is_zero_knowledge(
      net, p, parse_rat(a.get_or("kappa", "1")),
      static_cast<unsigned>(parse_long(a.get_or("word-len", "32"))),
      static_cast<int>(parse_long(a.get_or("budget", "2"))));
  switch (v.kind) {
    case ZkVerdict::Kind::Zk:
      out.line("verdict", "zk");
      return 0;
    case ZkVerdict::Kind::NotZk:
      out.line("verdict", "not_zk");
      out.line("reason", v.reason);
      return 0;
    case ZkVerdict::Kind::NotDeciding:
      out.line("verdict", "not_deciding");
      out.line("reason", v.reason);
      return 1;
  }
  return 1;
}

int cmd_export_dot(const Args& a) {
  TangleMachine m = canonicalize(parse_machine(read_file(a.get("machine"))));
  std::set<RegisterId> ins(m.inputs.begin(), m.inputs.end());
  std::set<RegisterId> outs(m.outputs.begin(), m.outputs.end());
  std::cout << "digraph \"" << m.name << "\" {\n";
  for (RegisterId r : m.registers) {
    std::string label = std::to_string(r);
    if (auto it = m.labels.find(r); it != m.labels.end())
      label += ":" + it->second;
    if (auto it = m.constants.find(r); it != m.constants.end())
      label += "=" + colour_str(it->second);
    std::string shape = ins.count(r)    ? ",shape=invtriangle"
                        : outs.count(r) ? ",shape=triangle"
                                        : "";
    std::cout << "  r" << r << " [label=\"" << label << "\"" << shape << "];\n";
  }
  for (const auto& it : m.interactions)
    for (const auto& pp : it.patients) {
      std::cout << "  r" << pp.in << " -> r" << pp.out << " [label=\""
                << op_str(it.op) << "\"];\n";
      std::cout << "  r" << it.agent << " -> r" << pp.out
                << " [style=dashed];\n";
    }
  for (size_t i = 0; i < m.wyes.size(); ++i) {
    const auto& w = m.wyes[i];
    std::cout << "  w" << i << " [shape=box,label=\""
              << (w.mode == WyeMode::Max ? "max" : "min") << "\"];\n";
    std::cout << "  r" << w.in1 << " -> w" << i << ";\n";
    std::cout << "  r" << w.in2 << " -> w" << i << ";\n";
    std::cout << "  w" << i << " -> r" << w.out << ";\n";
  }
  std::cout << "}\n";
  return 0;
}

const std::map<std::string, std::set<std::string>> kAllowed = {
    {"axioms", {"quagma", "samples", "seed", "format", "help"}},
    {"eval", {"machine", "quagma", "inputs", "format", "float", "help"}},
    {"compile-circuit", {"circuit", "backend", "out", "help"}},
    {"compile-tm", {"tm", "tape-len", "steps", "closed", "help"}},
    {"run-tm",
     {"tm", "tape-len", "steps", "tape", "state", "head", "reference", "format",
      "help"}},
    {"braidip", {"chi", "c", "s", "delta", "format", "float", "help"}},
    {"hopf-chernoff", {"c", "eps", "delta", "format", "float", "help"}},
    {"pcp-run",
     {"s", "c", "delta", "trials", "seed", "member", "nonmember", "jobs",
      "format", "help"}},
    {"rewrite",
     {"machine", "quagma", "list", "script", "explore", "max", "jobs", "help"}},
    {"zk-check",
     {"machine", "c", "s", "delta", "kappa", "word-len", "budget", "format",
      "help"}},
    {"export-dot", {"machine", "help"}},
};

}  // namespace

int main(int argc, char** argv) {
  std::string sub = argc > 1 ? argv[1] : "";
  if (sub == "--help" || sub.empty()) {
    std::cout << "usage: tangle SUBCOMMAND [options]\nsubcommands:";
    for (const auto& s : kSubcommands) std::cout << " " << s;
    std::cout << "\nRun 'tangle SUBCOMMAND --help' for details.\n";
    return sub.empty() ? 2 : 0;
  }
  if (!kSubcommands.count(sub)) {
    std::cerr << "unknown subcommand '" << sub << "'\n";
    return 2;
  }
  try {
    Args a = parse_args(argc, argv, 2, kAllowed.at(sub));
    if (a.flag.count("help")) {
      std::cout << kHelp.at(sub);
      return 0;
    }
    if (a.has("jobs") && sub != "pcp-run" && sub != "rewrite")
      throw UsageError("--jobs is only permitted for MC trials and exploration");
    if (sub == "axioms") return cmd_axioms(a);
    if (sub == "eval") return cmd_eval(a);
    if (sub == "compile-circuit") return cmd_compile_circuit(a);
    if (sub == "compile-tm") return cmd_compile_tm(a);
    if (sub == "run-tm") return cmd_run_tm(a);
    if (sub == "braidip") return cmd_braidip(a);
    if (sub == "hopf-chernoff") return cmd_hopf_chernoff(a);
    if (sub == "pcp-run") return cmd_pcp_run(a);
    if (sub == "rewrite") return cmd_rewrite(a);
    if (sub == "zk-check") return cmd_zk_check(a);
    if (sub == "export-dot") return cmd_export_dot(a);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

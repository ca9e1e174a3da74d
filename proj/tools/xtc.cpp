#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "xtc/error.hpp"
#include "xtc/genbench.hpp"
#include "xtc/instance_io.hpp"
#include "xtc/linarith.hpp"
#include "xtc/typecheck.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace xtc;

enum Exit { kOk = 0, kNo = 1, kUnknown = 2, kError = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void check_labels(const Alphabet& sigma, const Node& n) {
  if (!sigma.contains(n.label)) throw UnknownSymbol("label '" + n.label + "' is not in the alphabet");
  for (const Node& c : n.children) check_labels(sigma, c);
}

Tree load_tree(const Instance& inst, const std::string& text) {
  Tree t = parse_tree(text);
  check_labels(inst.transducer.alphabet(), t.root());
  return t;
}

struct Options {
  std::string file;
  std::string algo = "auto";
  std::size_t max_depth = Bounds{}.max_depth;
  std::size_t max_width = Bounds{}.max_width;
  bool no_bruteforce = false;
  bool as_json = false;
  std::string tree;
  std::string schema = "input";
  std::string formula;
  bool integer = false;
  std::string eliminate;
  std::string construction;
  std::vector<std::string> inputs;
  std::string mode = "nondeleting";
  std::uint64_t seed = 1;
  std::string profile = "dfa";
  std::string out;
};

int cmd_typecheck(const Options& o) {
  Instance inst = load_instance(o.file);
  Bounds b;
  b.max_depth = o.max_depth;
  b.max_width = o.max_width;
  TypecheckReport rep = typecheck(inst, parse_algo(o.algo), b, !o.no_bruteforce);
  const Verdict& v = rep.verdict;
  if (o.as_json) {
    json j;
    j["verdict"] = to_string(v.kind);
    j["algorithm"] = to_string(rep.used);
    j["reduced_input"] = rep.reduced_input;
    if (v.counterexample) {
      const Counterexample& c = *v.counterexample;
      j["counterexample"] = {{"input", to_string(c.input)},
                             {"output", to_string(c.output)},
                             {"violation", to_string(c.violation)},
                             {"expected", c.expected}};
    }
    if (!v.note.empty()) j["note"] = v.note;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << to_string(v.kind) << "\n";
    std::cout << "algorithm: " << to_string(rep.used) << "\n";
    if (v.counterexample) {
      const Counterexample& c = *v.counterexample;
      std::cout << "input: " << to_string(c.input) << "\n";
      std::cout << "output: " << (c.output.is_empty() ? "(empty)" : to_string(c.output)) << "\n";
      std::cout << "violation: " << to_string(c.violation) << "\n";
      std::cout << "expected: " << c.expected << "\n";
    }
    if (!v.note.empty()) std::cout << "note: " << one_line(v.note) << "\n";
  }
  switch (v.kind) {
    case Verdict::Kind::Typechecks: return kOk;
    case Verdict::Kind::Counterexample: return kNo;
    case Verdict::Kind::Unknown: return kUnknown;
  }
  return kError;
}

int cmd_validate_tree(const Options& o) {
  Instance inst = load_instance(o.file);
  Tree t = load_tree(inst, o.tree);
  bool ok = false;
  std::string where, reason;
  if (o.schema == "input") {
    Check c = dtd_validate(inst.input, t);
    ok = c.ok;
    where = to_string(c.at);
    reason = c.reason;
  } else if (const Dtd* d = std::get_if<Dtd>(&inst.output)) {
    Check c = dtd_validate(*d, t);
    ok = c.ok;
    where = to_string(c.at);
    reason = c.reason;
  } else {
    ok = nta_membership(std::get<NtAutomaton>(inst.output), t).accepted;
    if (!ok) {
      where = to_string(NodeAddress{});
      reason = "no accepting run";
    }
  }
  if (o.as_json) {
    json j{{"valid", ok}};
    if (!ok) j["violation"] = {{"node", where}, {"reason", reason}};
    std::cout << j.dump(2) << "\n";
  } else if (ok) {
    std::cout << "valid\n";
  } else {
    std::cout << "invalid at " << where << ": " << one_line(reason) << "\n";
  }
  return ok ? kOk : kNo;
}

int cmd_run(const Options& o) {
  Instance inst = load_instance(o.file);
  Tree out = apply(inst.transducer, load_tree(inst, o.tree));
  if (o.as_json)
    std::cout << json{{"output", to_string(out)}, {"empty", out.is_empty()}}.dump(2) << "\n";
  else
    std::cout << to_string(out) << "\n";
  return kOk;
}

int cmd_reduce(const Options& o) {
  Instance inst = load_instance(o.file);
  const Dtd* d = &inst.input;
  if (o.schema == "output") {
    d = std::get_if<Dtd>(&inst.output);
    if (!d) throw NotApplicable("the output schema is an automaton, not a DTD");
  }
  Dtd r = dtd_reduce(*d);
  SymbolMask live = live_symbols(r);
  std::vector<std::string> removed;
  for (SymbolId a = 0; a < live.size(); ++a)
    if (!live[a]) removed.push_back(r.alphabet().symbol(a));
  if (o.as_json) {
    json j{{"start", r.start()}, {"removed", removed}, {"contents", json::object()}};
    for (SymbolId a = 0; a < live.size(); ++a)
      if (live[a]) j["contents"][r.alphabet().symbol(a)] = r.content(a).to_text();
    std::cout << j.dump(2) << "\n";
  } else {
    if (!removed.empty()) {
      std::cout << "# removed:";
      for (const auto& a : removed) std::cout << " " << a;
      std::cout << "\n";
    }
    std::cout << o.schema << "-dtd start=" << r.start() << "\n" << write_dtd(r);
  }
  return kOk;
}

std::string show(const Rational& r) { return to_string(r); }
std::string show(std::int64_t v) { return std::to_string(v); }

template <class A>
json witness_json(const A& w) {
  json j = json::object();
  for (const auto& [x, v] : w) j[x] = show(v);
  return j;
}

template <class A>
std::string witness_text(const A& w) {
  std::string s;
  for (const auto& [x, v] : w) s += (s.empty() ? "" : ", ") + x + " = " + show(v);
  return s;
}

int cmd_linarith(const Options& o) {
  Formula f = parse_formula(o.formula);
  if (!o.eliminate.empty()) {
    Formula g = qe_eliminate(f, o.eliminate);
    if (o.as_json)
      std::cout << json{{"formula", to_string(g)}}.dump(2) << "\n";
    else
      std::cout << to_string(g) << "\n";
    return kOk;
  }
  json j;
  std::string text;
  int code = kOk;
  if (o.integer) {
    IntResult r = integer_feasible_cells(f);
    j["domain"] = "integer";
    if (r.status == Feasibility::Feasible) {
      j["result"] = "sat";
      j["witness"] = witness_json(r.witness);
      text = "sat: " + witness_text(r.witness);
    } else if (r.status == Feasibility::Infeasible) {
      j["result"] = "unsat";
      text = "unsat";
      code = kNo;
    } else {
      j["result"] = "unknown";
      text = "unknown";
      code = kUnknown;
    }
    if (!r.note.empty()) {
      j["note"] = r.note;
      text += "\nnote: " + one_line(r.note);
    }
  } else {
    j["domain"] = "rational";
    if (auto w = rational_satisfiable(f)) {
      j["result"] = "sat";
      j["witness"] = witness_json(*w);
      text = "sat: " + witness_text(*w);
    } else {
      j["result"] = "unsat";
      text = "unsat";
      code = kNo;
    }
  }
  if (o.as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
  return code;
}

Profile profile_named(const std::string& name) {
  if (name == "dfa") return dfa_profile();
  if (name == "sl") return sl_profile();
  throw SemanticError("unknown profile '" + name + "' (dfa, sl)");
}

int cmd_generate(const Options& o) {
  const std::string& c = o.construction;
  auto need = [&](std::size_t lo) {
    if (o.inputs.size() < lo) throw SemanticError(c + " needs at least " + std::to_string(lo) + " input file(s)");
  };
  auto automaton = [&](const std::string& path) {
    try {
      return parse_automaton_file(read_file(path), binary_alphabet());
    } catch (const Error& e) {
      throw Error(path + ": " + e.what());
    }
  };
  std::string text;
  if (c == "random") {
    Instance inst = gen_random_instance(o.seed, profile_named(o.profile));
    text = "# random instance, seed " + std::to_string(o.seed) + ", profile " + o.profile + "\n" + write_instance(inst);
  } else {
    GeneratedInstance g;
    if (c == "dfa-intersection") {
      need(1);
      std::vector<Dfa> ms;
      for (const auto& p : o.inputs) ms.push_back(nfa_as_dfa(automaton(p)));
      g = gen_dfa_intersection(ms);
    } else if (c == "nfa-universality") {
      need(1);
      g = gen_nfa_universality(automaton(o.inputs[0]));
    } else if (c == "nfa-emptiness") {
      need(1);
      g = gen_nfa_emptiness_deg2(automaton(o.inputs[0]));
    } else if (c == "tdbta-intersection") {
      need(1);
      if (o.mode != "deleting" && o.mode != "nondeleting")
        throw SemanticError("unknown mode '" + o.mode + "' (deleting, nondeleting)");
      std::vector<TdbtAutomaton> as;
      for (const auto& p : o.inputs) as.push_back(parse_tdbta(read_file(p)));
      g = gen_tdbta_intersection(as, o.mode == "deleting" ? TdbtaMode::Deleting : TdbtaMode::Nondeleting);
    } else if (c == "tiling") {
      need(1);
      g = gen_tiling(parse_tiling(read_file(o.inputs[0])));
    } else {
      throw SemanticError("unknown construction '" + c + "'");
    }
    text = "# " + c + ": " + one_line(g.provenance) + "\n# ground-truth: " +
           (g.ground_truth ? "typechecks" : "fails") + " (" + one_line(g.oracle) + ")\n" + write_instance(g.instance);
  }
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error("cannot write '" + o.out + "'");
    f << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typechecking of top-down tree transducers against DTD and tree-automaton schemas"};
  app.require_subcommand(1);
  Options o;

  auto* tc = app.add_subcommand("typecheck", "Decide whether every valid input maps to a valid output");
  tc->add_option("file", o.file, "instance file")->required();
  tc->add_option("--algo", o.algo, "auto, fixed-input-sl, fixed-input-dfa, fixed-io-nfa, brute-force, type-saturation");
  tc->add_option("--max-depth", o.max_depth, "brute-force input depth bound");
  tc->add_option("--max-width", o.max_width, "brute-force children bound");
  tc->add_flag("--no-bruteforce", o.no_bruteforce, "never enumerate inputs");
  tc->add_flag("--json", o.as_json);

  auto* vt = app.add_subcommand("validate-tree", "Check a tree against the input or output schema");
  vt->add_option("file", o.file)->required();
  vt->add_option("--tree", o.tree)->required();
  vt->add_option("--schema", o.schema)->check(CLI::IsMember({"input", "output"}));
  vt->add_flag("--json", o.as_json);

  auto* rt = app.add_subcommand("run-transducer", "Print the transducer's output on a tree");
  rt->add_option("file", o.file)->required();
  rt->add_option("--tree", o.tree)->required();
  rt->add_flag("--json", o.as_json);

  auto* gen = app.add_subcommand("generate", "Build a hardness-reduction or random instance");
  gen->add_option("construction", o.construction,
                  "dfa-intersection, nfa-universality, nfa-emptiness, tdbta-intersection, tiling, random")
      ->required();
  gen->add_option("--dfas,--nfa,--tdbtas,--tiling", o.inputs, "source files");
  gen->add_option("--mode", o.mode, "tdbta-intersection: deleting or nondeleting");
  gen->add_option("--seed", o.seed);
  gen->add_option("--profile", o.profile, "random: dfa or sl");
  gen->add_option("--out", o.out, "write here instead of stdout");

  auto* rd = app.add_subcommand("reduce-dtd", "Remove symbols that occur in no valid tree");
  rd->add_option("file", o.file)->required();
  rd->add_option("--schema", o.schema)->check(CLI::IsMember({"input", "output"}));
  rd->add_flag("--json", o.as_json);

  auto* la = app.add_subcommand("linarith", "Satisfiability of a linear arithmetic formula");
  la->add_option("formula", o.formula)->required();
  la->add_flag("--integer", o.integer, "integer domain (default rational)");
  la->add_option("--eliminate", o.eliminate, "print the formula with this variable eliminated");
  la->add_flag("--json", o.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout.flush();
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kError;
  }

  try {
    if (*tc) return cmd_typecheck(o);
    if (*vt) return cmd_validate_tree(o);
    if (*rt) return cmd_run(o);
    if (*gen) return cmd_generate(o);
    if (*rd) return cmd_reduce(o);
    if (*la) return cmd_linarith(o);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kError;
  }
  return kError;
}

#include "xtc/typecheck.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <boost/functional/hash.hpp>

#include "xtc/error.hpp"
#include "xtc/linarith.hpp"

namespace xtc {

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Typechecks: return "typechecks";
    case Verdict::Kind::Counterexample: return "counterexample";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(Algo a) {
  switch (a) {
    case Algo::Auto: return "auto";
    case Algo::FixedInputSl: return "fixed-input-sl";
    case Algo::FixedInputDfa: return "fixed-input-dfa";
    case Algo::FixedIoNfa: return "fixed-io-nfa";
    case Algo::BruteForce: return "brute-force";
    case Algo::Saturation: return "type-saturation";
  }
  return "?";
}

Algo parse_algo(std::string_view s) {
  for (Algo a : {Algo::Auto, Algo::FixedInputSl, Algo::FixedInputDfa, Algo::FixedIoNfa, Algo::BruteForce,
                 Algo::Saturation})
    if (to_string(a) == s) return a;
  throw SemanticError("unknown algorithm '" + std::string(s) + "'");
}

bool output_member(const OutputSchema& s, const Tree& t) {
  if (const Dtd* d = std::get_if<Dtd>(&s)) return dtd_validate(*d, t).ok;
  return nta_membership(std::get<NtAutomaton>(s), t).accepted;
}

bool validate_counterexample(const Instance& inst, const Tree& input) {
  if (!dtd_validate(inst.input, input).ok) return false;
  return !output_member(inst.output, apply(inst.transducer, input));
}

namespace {

bool is_empty_regex(const LangRep& m) {
  return m.kind() == LangRep::Kind::Regex && m.regex().kind() == Regex::Kind::Empty;
}

bool uses_only(const Dtd& d, LangRep::Kind k) {
  for (SymbolId a = 0; a < d.size(); ++a)
    if (d.content(a).kind() != k && !is_empty_regex(d.content(a))) return false;
  return true;
}

SlFormula sl_of(const LangRep& m) {
  if (m.is_sl()) return m.sl();
  if (is_empty_regex(m)) return SlFormula::falsity();
  throw NotApplicable("content model is not SL");
}

Counterexample describe(const Instance& inst, Tree input) {
  Counterexample c;
  c.output = apply(inst.transducer, input);
  c.input = std::move(input);
  if (const Dtd* d = std::get_if<Dtd>(&inst.output)) {
    Check v = dtd_validate(*d, c.output);
    c.violation = v.at;
    if (c.output.is_empty() || c.output.root().label != d->start())
      c.expected = "root labelled " + d->start();
    else
      c.expected = d->content(label_at(c.output, v.at)).to_text();
  } else {
    c.expected = "accepting run of the output automaton";
  }
  return c;
}

Verdict found(const Instance& inst, Tree input, std::string note = {}) {
  if (!validate_counterexample(inst, input))
    throw std::logic_error("internal error: counterexample " + to_string(input) + " does not validate");
  return {Verdict::Kind::Counterexample, describe(inst, std::move(input)), std::move(note)};
}

struct Split {
  std::vector<SymbolWord> z;  // z0 .. zn
  std::vector<Label> q;       // q1 .. qn
};

Split split_children(const Alphabet& sigma, const RhsNode& u) {
  Split s;
  s.z.emplace_back();
  for (const RhsNode& c : u.children) {
    if (c.is_state) {
      s.q.push_back(c.label);
      s.z.emplace_back();
    } else {
      s.z.back().push_back(sigma.id(c.label));
    }
  }
  return s;
}

void for_each_node(const Rhs& h, const std::function<void(const RhsNode&)>& fn) {
  for (const RhsNode& n : h) {
    if (n.is_state) continue;
    fn(n);
    for_each_node(n.children, fn);
  }
}

void collect_states(const Rhs& h, std::vector<Label>& out) {
  for (const RhsNode& n : h) {
    if (n.is_state) {
      if (std::find(out.begin(), out.end(), n.label) == out.end()) out.push_back(n.label);
    } else {
      collect_states(n.children, out);
    }
  }
}

// Everything the string-level algorithms share: reduced input schema, witnesses and RP with back-pointers.
struct Prepared {
  const Instance& inst;
  Dtd din;
  SymbolMask live;
  Productivity prod;
  std::vector<StatePair> pairs;
  std::map<StatePair, std::optional<StatePair>> parent;

  explicit Prepared(const Instance& i) : inst(i), din(dtd_reduce(i.input)) {
    live = live_symbols(din);
    prod = productive_symbols(din);
    const Transducer& t = inst.transducer;
    const Alphabet& sigma = din.alphabet();
    StatePair seed{t.initial(), din.start()};
    pairs.push_back(seed);
    parent[seed] = std::nullopt;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      StatePair p = pairs[k];
      const Rhs* r = t.rule(p.first, p.second);
      if (!r) continue;
      std::vector<Label> qs;
      collect_states(*r, qs);
      if (qs.empty()) continue;
      SymbolId a = sigma.id(p.second);
      for (SymbolId c = 0; c < sigma.size(); ++c) {
        if (!live[c] || !din.content(a).witness_containing(c, &live)) continue;
        for (const Label& q : qs) {
          StatePair n{q, sigma.symbol(c)};
          if (parent.emplace(n, p).second) pairs.push_back(n);
        }
      }
    }
  }

  Node min_tree(SymbolId c) const { return *symbol_witness(din, prod, c); }

  // Lifts a children string at a reachable pair to a full input tree.
  Tree assemble(const StatePair& at, const SymbolWord& w) const {
    const Alphabet& sigma = din.alphabet();
    Node cur{at.second, {}};
    for (SymbolId c : w) cur.children.push_back(min_tree(c));
    StatePair p = at;
    while (auto up = parent.at(p)) {
      SymbolId a = sigma.id(up->second);
      SymbolId c = sigma.id(p.second);
      SymbolWord v = *din.content(a).witness_containing(c, &live);
      Node n{up->second, {}};
      bool placed = false;
      for (SymbolId x : v) {
        if (!placed && x == c) {
          n.children.push_back(std::move(cur));
          placed = true;
        } else {
          n.children.push_back(min_tree(x));
        }
      }
      cur = std::move(n);
      p = *up;
    }
    return Tree(std::move(cur));
  }

  const Dtd& dout() const { return std::get<Dtd>(inst.output); }

  std::optional<Verdict> root_check() const {
    const Rhs* r = inst.transducer.rule(inst.transducer.initial(), din.start());
    if (r && r->size() == 1 && !(*r)[0].is_state && (*r)[0].label == dout().start()) return std::nullopt;
    return found(inst, Tree(min_tree(din.start_id())), "initial rule does not produce the output start symbol");
  }
};

void require_string_level(const Instance& inst, const char* name) {
  if (!std::holds_alternative<Dtd>(inst.output)) throw NotApplicable(std::string(name) + " needs a DTD output schema");
  if (!analyze(inst.transducer).nondeleting) throw NotApplicable(std::string(name) + " needs a nondeleting transducer");
}

SymbolWord image(const Transducer& t, const Label& q, SymbolId c, const Alphabet& sigma) {
  return to_symbols(sigma, state_image(t, q, {sigma.symbol(c)}));
}

std::size_t count_of(const SymbolWord& w, SymbolId c) { return std::count(w.begin(), w.end(), c); }

Formula translate(const SlFormula& f, const std::function<LinTerm(const Label&)>& term_of) {
  switch (f.kind()) {
    case SlFormula::Kind::True: return Formula::truth();
    case SlFormula::Kind::Eq:
      return Formula::compare(term_of(f.symbol()), "=", LinTerm(Rational(f.count())));
    case SlFormula::Kind::Ge:
      return Formula::compare(term_of(f.symbol()), ">=", LinTerm(Rational(f.count())));
    case SlFormula::Kind::Not: return !translate(f.parts()[0], term_of);
    case SlFormula::Kind::And:
    case SlFormula::Kind::Or: {
      std::vector<Formula> ps;
      for (const auto& g : f.parts()) ps.push_back(translate(g, term_of));
      return f.kind() == SlFormula::Kind::And ? Formula::conj(std::move(ps)) : Formula::disj(std::move(ps));
    }
  }
  return Formula::truth();
}

constexpr std::size_t kSearchCap = 4'000'000;

using Key = std::vector<StateId>;

// BFS with back-pointers over a deterministic successor function; returns the symbol path to a goal.
std::optional<SymbolWord> bfs(const std::vector<Key>& starts, std::size_t num_symbols,
                              const std::function<std::optional<Key>(const Key&, SymbolId)>& next,
                              const std::function<bool(const Key&)>& goal) {
  std::map<Key, std::pair<const Key*, SymbolId>> seen;
  std::deque<const Key*> queue;
  for (const Key& s : starts) {
    auto [it, fresh] = seen.emplace(s, std::make_pair(nullptr, SymbolId(0)));
    if (fresh) queue.push_back(&it->first);
  }
  while (!queue.empty()) {
    const Key* k = queue.front();
    queue.pop_front();
    if (goal(*k)) {
      SymbolWord w;
      for (const Key* cur = k; seen.at(*cur).first; cur = seen.at(*cur).first) w.push_back(seen.at(*cur).second);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (SymbolId c = 0; c < num_symbols; ++c) {
      auto n = next(*k, c);
      if (!n) continue;
      auto [it, fresh] = seen.emplace(std::move(*n), std::make_pair(k, c));
      if (!fresh) continue;
      if (seen.size() > kSearchCap) throw StateSpaceTooLarge("product search exceeds " + std::to_string(kSearchCap) + " states");
      queue.push_back(&it->first);
    }
  }
  return std::nullopt;
}

}  // namespace

std::set<StatePair> reachable_pairs(const Transducer& t, const Dtd& reduced_in) {
  Instance inst{reduced_in, reduced_in, t};
  Prepared p(inst);
  return {p.pairs.begin(), p.pairs.end()};
}

Verdict tc_fixed_input_sl(const Instance& inst) {
  require_string_level(inst, "fixed-input-sl");
  const Dtd& dout0 = std::get<Dtd>(inst.output);
  if (!uses_only(inst.input, LangRep::Kind::Sl) || !uses_only(dout0, LangRep::Kind::Sl))
    throw NotApplicable("fixed-input-sl needs DTD(SL) schemas");
  if (dtd_empty(inst.input).empty) return {Verdict::Kind::Typechecks, {}, "input language is empty"};
  Prepared p(inst);
  if (auto v = p.root_check()) return *v;
  const Alphabet& sigma = p.din.alphabet();
  const Transducer& t = inst.transducer;
  std::vector<SymbolId> vars;
  for (SymbolId c = 0; c < sigma.size(); ++c)
    if (p.live[c]) vars.push_back(c);
  auto var_name = [&](SymbolId c) { return "x_" + sigma.symbol(c); };

  for (const StatePair& pair : p.pairs) {
    const Rhs* r = t.rule(pair.first, pair.second);
    if (!r) continue;
    SlFormula phi = sl_of(p.din.content(pair.second));
    const std::uint64_t k_in = sl_max_int(phi);
    std::optional<Verdict> verdict;
    for_each_node(*r, [&](const RhsNode& u) {
      if (verdict) return;
      Split s = split_children(sigma, u);
      SlFormula psi = sl_of(p.dout().content(u.label));
      // k^c from the z-parts, k_j^c from the state images of a_j
      std::vector<std::vector<SymbolWord>> imgs(s.q.size());
      for (std::size_t i = 0; i < s.q.size(); ++i)
        for (SymbolId c : vars) imgs[i].push_back(image(t, s.q[i], c, sigma));
      auto term_of = [&](const Label& name) {
        SymbolId c = sigma.id(name);
        LinTerm term;
        std::size_t k = 0;
        for (const SymbolWord& z : s.z) k += count_of(z, c);
        term += LinTerm(Rational(k));
        for (std::size_t j = 0; j < vars.size(); ++j) {
          std::size_t kj = 0;
          for (std::size_t i = 0; i < s.q.size(); ++i) kj += count_of(imgs[i][j], c);
          term += LinTerm::var(var_name(vars[j]), Rational(kj));
        }
        return term;
      };
      Formula phi2 = translate(psi, term_of);
      const std::uint64_t i_out = sl_max_int(psi);
      // representatives a1^m1 ... as^ms with mi ≤ k+1
      std::vector<std::uint64_t> m(vars.size(), 0);
      while (true) {
        ParikhVector pv;
        for (std::size_t j = 0; j < vars.size(); ++j) pv[sigma.symbol(vars[j])] = m[j];
        if (sl_eval(phi, pv)) {
          CountingSystem cs;
          cs.phi2 = phi2;
          for (std::size_t j = 0; j < vars.size(); ++j) {
            cs.vars.push_back(var_name(vars[j]));
            if (m[j] <= k_in)
              cs.fixed[var_name(vars[j])] = m[j];
            else
              cs.above[var_name(vars[j])] = k_in;
          }
          if (auto sol = counting_feasible(cs, k_in, i_out)) {
            SymbolWord w;
            for (SymbolId c : vars)
              for (std::int64_t n = 0; n < sol->at(var_name(c)); ++n) w.push_back(c);
            verdict = found(inst, p.assemble(pair, w));
            return;
          }
        }
        std::size_t j = vars.size();
        while (j > 0 && m[j - 1] == k_in + 1) m[--j] = 0;
        if (j == 0) break;
        ++m[j - 1];
      }
    });
    if (verdict) return *verdict;
  }
  return {Verdict::Kind::Typechecks, {}, {}};
}

Verdict tc_fixed_input_dfa_bc(const Instance& inst) {
  require_string_level(inst, "fixed-input-dfa");
  const Dtd& dout0 = std::get<Dtd>(inst.output);
  if (!uses_only(inst.input, LangRep::Kind::Dfa) || !uses_only(dout0, LangRep::Kind::Dfa))
    throw NotApplicable("fixed-input-dfa needs DTD(DFA) schemas");
  if (dtd_empty(inst.input).empty) return {Verdict::Kind::Typechecks, {}, "input language is empty"};
  Prepared p(inst);
  if (auto v = p.root_check()) return *v;
  const Alphabet& sigma = p.din.alphabet();
  const Transducer& t = inst.transducer;

  for (const StatePair& pair : p.pairs) {
    const Rhs* r = t.rule(pair.first, pair.second);
    if (!r) continue;
    const Dfa A = p.din.content(pair.second).to_dfa();
    std::optional<Verdict> verdict;
    for_each_node(*r, [&](const RhsNode& u) {
      if (verdict || A.num_states() == 0) return;
      Split s = split_children(sigma, u);
      const Dfa B = p.dout().content(u.label).to_dfa().completed();
      const std::size_t ell = s.q.size();
      const std::size_t nb = B.num_states();
      // copy i advances by q_i[c]
      std::vector<std::vector<StateId>> step(ell, std::vector<StateId>(nb * sigma.size()));
      for (std::size_t i = 0; i < ell; ++i)
        for (SymbolId c = 0; c < sigma.size(); ++c) {
          SymbolWord img = image(t, s.q[i], c, sigma);
          for (StateId b = 0; b < nb; ++b) step[i][b * sigma.size() + c] = B.run(b, img);
        }
      const StateId p1 = B.run(B.initial(), s.z[0]);
      // key: guessed p_2..p_ell, state of A, current p'_1..p'_ell
      const std::size_t seeds = ell == 0 ? 0 : ell - 1;
      double space = 1;
      for (std::size_t i = 0; i < seeds; ++i) space *= double(nb);
      if (space > double(kSearchCap)) throw StateSpaceTooLarge("too many guessed state tuples");
      std::vector<Key> starts;
      Key guess(seeds, 0);
      while (true) {
        Key k = guess;
        k.push_back(A.initial());
        if (ell) {
          k.push_back(p1);
          k.insert(k.end(), guess.begin(), guess.end());
        }
        starts.push_back(std::move(k));
        std::size_t i = seeds;
        while (i > 0 && guess[i - 1] + 1 == nb) guess[--i] = 0;
        if (i == 0) break;
        ++guess[i - 1];
      }
      auto next = [&](const Key& k, SymbolId c) -> std::optional<Key> {
        StateId a = A.next(k[seeds], c);
        if (a == kNoState) return std::nullopt;
        Key n = k;
        n[seeds] = a;
        for (std::size_t i = 0; i < ell; ++i) n[seeds + 1 + i] = step[i][k[seeds + 1 + i] * sigma.size() + c];
        return n;
      };
      auto goal = [&](const Key& k) {
        if (!A.is_final(k[seeds])) return false;
        if (ell == 0) return !B.is_final(p1);
        for (std::size_t i = 0; i + 1 < ell; ++i)
          if (B.run(k[seeds + 1 + i], s.z[i + 1]) != k[i]) return false;
        return !B.is_final(B.run(k[seeds + ell], s.z[ell]));
      };
      if (auto w = bfs(starts, sigma.size(), next, goal)) verdict = found(inst, p.assemble(pair, *w));
    });
    if (verdict) return *verdict;
  }
  return {Verdict::Kind::Typechecks, {}, {}};
}

Verdict tc_fixed_io_nfa(const Instance& inst) {
  require_string_level(inst, "fixed-io-nfa");
  if (dtd_empty(inst.input).empty) return {Verdict::Kind::Typechecks, {}, "input language is empty"};
  Prepared p(inst);
  if (auto v = p.root_check()) return *v;
  const Alphabet& sigma = p.din.alphabet();
  const Transducer& t = inst.transducer;

  for (const StatePair& pair : p.pairs) {
    const Rhs* r = t.rule(pair.first, pair.second);
    if (!r) continue;
    const Dfa A = p.din.content(pair.second).to_dfa();
    std::optional<Verdict> verdict;
    for_each_node(*r, [&](const RhsNode& u) {
      if (verdict || A.num_states() == 0) return;
      Split s = split_children(sigma, u);
      const Dfa B = p.dout().content(u.label).to_dfa().completed();
      const std::size_t nb = B.num_states();
      std::vector<Label> fs;  // distinct f_q
      for (const Label& q : s.q)
        if (std::find(fs.begin(), fs.end(), q) == fs.end()) fs.push_back(q);
      std::vector<std::size_t> f_of;
      for (const Label& q : s.q) f_of.push_back(std::find(fs.begin(), fs.end(), q) - fs.begin());
      // f_m(b, c) = δ̂_out(b, q_m[c])
      std::vector<std::vector<StateId>> f(fs.size(), std::vector<StateId>(nb * sigma.size()));
      for (std::size_t m = 0; m < fs.size(); ++m)
        for (SymbolId c = 0; c < sigma.size(); ++c) {
          SymbolWord img = image(t, fs[m], c, sigma);
          for (StateId b = 0; b < nb; ++b) f[m][b * sigma.size() + c] = B.run(b, img);
        }
      // key: state of A, then for each (f_m, start b) the state reached on f_m's image of w
      Key init{A.initial()};
      for (std::size_t m = 0; m < fs.size(); ++m)
        for (StateId b = 0; b < nb; ++b) init.push_back(b);
      auto next = [&](const Key& k, SymbolId c) -> std::optional<Key> {
        StateId a = A.next(k[0], c);
        if (a == kNoState) return std::nullopt;
        Key n(k.size());
        n[0] = a;
        for (std::size_t m = 0; m < fs.size(); ++m)
          for (StateId b = 0; b < nb; ++b) {
            std::size_t slot = 1 + m * nb + b;
            n[slot] = f[m][k[slot] * sigma.size() + c];
          }
        return n;
      };
      auto goal = [&](const Key& k) {
        if (!A.is_final(k[0])) return false;
        StateId cur = B.run(B.initial(), s.z[0]);
        for (std::size_t j = 0; j < s.q.size(); ++j) {
          cur = k[1 + f_of[j] * nb + cur];
          cur = B.run(cur, s.z[j + 1]);
        }
        return !B.is_final(cur);
      };
      if (auto w = bfs({init}, sigma.size(), next, goal)) verdict = found(inst, p.assemble(pair, *w));
    });
    if (verdict) return *verdict;
  }
  return {Verdict::Kind::Typechecks, {}, {}};
}

Verdict tc_bruteforce(const Instance& inst, const Bounds& b) {
  TreeEnumerator probe(inst.input, b.max_depth, b.max_width, b.cap);
  for (std::size_t d = 1; d <= b.max_depth; ++d) {
    TreeEnumerator e(inst.input, d, b.max_width, b.cap);
    for (const Node& n : e.trees()) {
      if (depth(n) != d) continue;
      Tree t(n);
      if (!output_member(inst.output, apply(inst.transducer, t))) return found(inst, t);
    }
  }
  if (probe.exhaustive()) return {Verdict::Kind::Typechecks, {}, "input language enumerated completely"};
  return {Verdict::Kind::Unknown, {},
          "no counterexample with depth <= " + std::to_string(b.max_depth) + " and width <= " +
              std::to_string(b.max_width)};
}

namespace {

Nfa nfa_of(const LangRep& m) { return m.is_sl() ? m.to_dfa().to_nfa() : m.nfa(); }

// A DTD is the NTA whose states are the labels themselves.
NtAutomaton as_nta(const OutputSchema& s) {
  if (const NtAutomaton* b = std::get_if<NtAutomaton>(&s)) return *b;
  const Dtd& d = std::get<Dtd>(s);
  NtAutomaton b(d.alphabet(), d.alphabet());
  for (SymbolId a = 0; a < d.size(); ++a)
    if (!is_empty_regex(d.content(a))) b.set_transition(d.alphabet().symbol(a), d.alphabet().symbol(a), d.content(a));
  b.set_final(d.start());
  return b;
}

using Words = std::vector<std::uint64_t>;

class Saturator {
 public:
  Saturator(const Instance& inst, std::size_t max_configs)
      : inst_(inst), t_(inst.transducer), sigma_(inst.input.alphabet()), b_(as_nta(inst.output)),
        max_configs_(max_configs) {
    gather_states();
    build_edges();
  }

  Verdict run() {
    const std::size_t ns = sigma_.size();
    syms_.resize(ns);
    types_.resize(ns);
    for (SymbolId a = 0; a < ns; ++a) {
      syms_[a].dfa = inst_.input.content(a).to_dfa();
      if (syms_[a].dfa.num_states() == 0) continue;
      Words key{syms_[a].dfa.initial()};
      for (std::size_t i = 0; i < qs_.size(); ++i) key.insert(key.end(), identity_.begin(), identity_.end());
      if (auto v = add_config(a, std::move(key), kNone, 0, 0)) return *v;
    }
    for (bool progress = true; progress;) {
      progress = false;
      for (SymbolId a = 0; a < ns; ++a) {
        Sym& s = syms_[a];
        for (std::size_t i = 0; i < s.configs.size(); ++i) {
          for (SymbolId c = 0; c < ns; ++c) {
            while (s.configs[i].done[c] < types_[c].size()) {
              std::uint32_t j = s.configs[i].done[c]++;
              const Words& from = *s.configs[i].key;
              StateId nd = s.dfa.next(StateId(from[0]), c);
              if (nd == kNoState) continue;
              Words key(from.size());
              key[0] = nd;
              const Words& ty = types_[c][j].value;
              for (std::size_t q = 0; q < qs_.size(); ++q)
                compose(&from[1 + q * rows_], &ty[q * rows_], &key[1 + q * rows_]);
              std::size_t before = s.configs.size();
              if (auto v = add_config(a, std::move(key), std::uint32_t(i), c, j)) return *v;
              if (s.configs.size() != before) progress = true;
            }
          }
        }
      }
    }
    return {Verdict::Kind::Typechecks, {}, "behaviour types saturated"};
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Edge {
    StateId p;
    std::size_t off, n;
    std::uint64_t init = 0, fin = 0;
    std::vector<std::uint64_t> succ;  // succ[s * |P| + p']
  };
  struct Config {
    const Words* key;
    std::uint32_t parent;
    SymbolId child;
    std::uint32_t type;
    std::vector<std::uint32_t> done;
  };
  struct Sym {
    Dfa dfa;
    std::unordered_map<Words, std::uint32_t, boost::hash<Words>> index;
    std::vector<Config> configs;
  };
  struct Type {
    Words value;
    Node rep;
  };

  void gather_states() {
    std::map<Label, std::vector<Label>> refs;
    for (const auto& [key, rhs] : t_.rules()) collect_states(rhs, refs[key.first]);
    qs_.push_back(t_.initial());
    for (std::size_t i = 0; i < qs_.size(); ++i)
      for (const Label& p : refs[qs_[i]])
        if (std::find(qs_.begin(), qs_.end(), p) == qs_.end()) qs_.push_back(p);
    for (std::size_t i = 0; i < qs_.size(); ++i) q_index_[qs_[i]] = i;
  }

  static void collect_labels(const Rhs& h, std::set<Label>& out) {
    for (const RhsNode& n : h) {
      if (n.is_state) continue;
      out.insert(n.label);
      collect_labels(n.children, out);
    }
  }

  void build_edges() {
    std::set<Label> out_labels;
    for (const auto& [key, rhs] : t_.rules()) collect_labels(rhs, out_labels);
    const std::size_t np = b_.states().size();
    edges_of_.resize(sigma_.size());
    for (const Label& l : out_labels) {
      SymbolId b = sigma_.id(l);
      for (StateId p = 0; p < np; ++p) {
        const LangRep* m = b_.transition(p, b_.alphabet().id(l));
        if (!m) continue;
        Nfa nfa = nfa_of(*m);
        if (nfa.num_states() > 64)
          throw StateSpaceTooLarge("saturation: content automaton with " + std::to_string(nfa.num_states()) +
                                   " states (limit 64)");
        Edge e{p, rows_, nfa.num_states(), 0, 0, std::vector<std::uint64_t>(nfa.num_states() * np, 0)};
        for (StateId s : nfa.initial()) e.init |= std::uint64_t(1) << s;
        for (StateId s = 0; s < e.n; ++s) {
          if (nfa.is_final(s)) e.fin |= std::uint64_t(1) << s;
          for (StateId x = 0; x < np; ++x)
            for (StateId to : nfa.successors(s, x)) e.succ[s * np + x] |= std::uint64_t(1) << to;
        }
        rows_ += e.n;
        edges_of_[b].push_back(edges_.size());
        edges_.push_back(std::move(e));
      }
    }
    identity_.assign(rows_, 0);
    for (const Edge& e : edges_)
      for (std::size_t s = 0; s < e.n; ++s) identity_[e.off + s] = std::uint64_t(1) << s;
  }

  void compose(const std::uint64_t* x, const std::uint64_t* y, std::uint64_t* out) const {
    for (const Edge& e : edges_)
      for (std::size_t s = 0; s < e.n; ++s) {
        std::uint64_t m = x[e.off + s], r = 0;
        while (m) {
          r |= y[e.off + std::countr_zero(m)];
          m &= m - 1;
        }
        out[e.off + s] = r;
      }
  }

  bool accepts(const Words& h, const Edge& e) const {
    for (std::uint64_t m = e.init; m; m &= m - 1)
      if (h[e.off + std::countr_zero(m)] & e.fin) return true;
    return false;
  }

  // States an output tree b(children) can be assigned.
  std::vector<StateId> tree_states(SymbolId b, const Words& children) const {
    std::vector<StateId> out;
    for (std::size_t k : edges_of_[b])
      if (accepts(children, edges_[k])) out.push_back(edges_[k].p);
    return out;
  }

  Words single_tree(const std::vector<StateId>& sts) const {
    const std::size_t np = b_.states().size();
    Words r(rows_, 0);
    for (const Edge& e : edges_)
      for (std::size_t s = 0; s < e.n; ++s)
        for (StateId p : sts) r[e.off + s] |= e.succ[s * np + p];
    return r;
  }

  Words eval(const Rhs& h, const Words& x) const {
    Words acc = identity_, tmp(rows_);
    for (const RhsNode& n : h) {
      if (n.is_state) {
        compose(acc.data(), &x[1 + q_index_.at(n.label) * rows_], tmp.data());
      } else {
        Words one = single_tree(tree_states(sigma_.id(n.label), eval(n.children, x)));
        compose(acc.data(), one.data(), tmp.data());
      }
      acc.swap(tmp);
    }
    return acc;
  }

  Words type_of(SymbolId a, const Words& x) const {
    Words v;
    v.reserve(qs_.size() * rows_);
    for (const Label& q : qs_) {
      const Rhs* r = t_.rule(q, sigma_.symbol(a));
      Words part = r ? eval(*r, x) : identity_;
      v.insert(v.end(), part.begin(), part.end());
    }
    return v;
  }

  bool root_ok(SymbolId a, const Words& x) const {
    const Rhs* r = t_.rule(t_.initial(), sigma_.symbol(a));
    if (!r || r->empty()) return false;
    for (StateId p : tree_states(sigma_.id((*r)[0].label), eval((*r)[0].children, x)))
      if (b_.is_final(p)) return true;
    return false;
  }

  Node representative(SymbolId a, std::uint32_t cfg) const {
    Node n{sigma_.symbol(a), {}};
    for (std::uint32_t i = cfg; syms_[a].configs[i].parent != kNone; i = syms_[a].configs[i].parent) {
      const Config& c = syms_[a].configs[i];
      n.children.push_back(types_[c.child][c.type].rep);
    }
    std::reverse(n.children.begin(), n.children.end());
    return n;
  }

  std::optional<Verdict> add_config(SymbolId a, Words key, std::uint32_t parent, SymbolId child, std::uint32_t type) {
    Sym& s = syms_[a];
    auto [it, fresh] = s.index.emplace(std::move(key), std::uint32_t(s.configs.size()));
    if (!fresh) return std::nullopt;
    if (++total_ > max_configs_)
      throw StateSpaceTooLarge("saturation exceeds " + std::to_string(max_configs_) + " configurations");
    std::uint32_t idx = it->second;
    s.configs.push_back({&it->first, parent, child, type, std::vector<std::uint32_t>(sigma_.size(), 0)});
    const Words& x = it->first;
    if (!s.dfa.is_final(StateId(x[0]))) return std::nullopt;
    if (a == inst_.input.start_id() && !root_ok(a, x)) return found(inst_, Tree(representative(a, idx)));
    Words v = type_of(a, x);
    if (std::none_of(types_[a].begin(), types_[a].end(), [&](const Type& t) { return t.value == v; }))
      types_[a].push_back({std::move(v), representative(a, idx)});
    return std::nullopt;
  }

  const Instance& inst_;
  const Transducer& t_;
  const Alphabet& sigma_;
  NtAutomaton b_;
  std::size_t max_configs_;
  std::size_t total_ = 0;
  std::vector<Label> qs_;
  std::map<Label, std::size_t> q_index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> edges_of_;
  std::size_t rows_ = 0;
  Words identity_;
  std::vector<Sym> syms_;
  std::vector<std::vector<Type>> types_;
};

}  // namespace

Verdict tc_saturation(const Instance& inst, std::size_t max_configs) {
  return Saturator(inst, max_configs).run();
}

TypecheckReport typecheck(const Instance& inst, Algo algo, const Bounds& b, bool allow_bruteforce) {
  const Alphabet& sigma = inst.transducer.alphabet();
  bool same = inst.input.alphabet() == sigma;
  if (const Dtd* d = std::get_if<Dtd>(&inst.output)) same = same && d->alphabet() == sigma;
  else same = same && std::get<NtAutomaton>(inst.output).alphabet() == sigma;
  if (!same) throw SemanticError("schemas and transducer use different alphabets");
  if (auto v = validate(inst.transducer); !v.empty()) throw SemanticError(v.front().message);

  TypecheckReport rep;
  const bool automatic = algo == Algo::Auto;
  if (automatic) {
    TransducerAnalysis an = analyze(inst.transducer);
    const Dtd* dout = std::get_if<Dtd>(&inst.output);
    if (dout && an.nondeleting) {
      if (uses_only(inst.input, LangRep::Kind::Sl) && uses_only(*dout, LangRep::Kind::Sl))
        algo = Algo::FixedInputSl;
      else if (uses_only(inst.input, LangRep::Kind::Dfa) && uses_only(*dout, LangRep::Kind::Dfa) &&
               an.copying_width <= 4)
        algo = Algo::FixedInputDfa;
      else
        algo = Algo::FixedIoNfa;
    } else if (allow_bruteforce) {
      algo = Algo::BruteForce;
    } else {
      algo = Algo::Saturation;
    }
  }
  rep.used = algo;
  rep.reduced_input = algo != Algo::BruteForce && algo != Algo::Saturation;
  switch (algo) {
    case Algo::FixedInputSl: rep.verdict = tc_fixed_input_sl(inst); break;
    case Algo::FixedInputDfa: rep.verdict = tc_fixed_input_dfa_bc(inst); break;
    case Algo::FixedIoNfa: rep.verdict = tc_fixed_io_nfa(inst); break;
    case Algo::BruteForce:
      if (!allow_bruteforce) throw NoApplicableAlgorithm("brute force is disabled");
      try {
        rep.verdict = tc_bruteforce(inst, b);
      } catch (const BoundsTooLarge& e) {
        if (!automatic) throw;
        rep.verdict = Verdict{Verdict::Kind::Unknown, std::nullopt, std::string("brute force gave up: ") + e.what()};
      }
      if (automatic && rep.verdict.kind == Verdict::Kind::Unknown) {
        try {
          rep.verdict = tc_saturation(inst);
          rep.used = Algo::Saturation;
        } catch (const StateSpaceTooLarge& e) {
          rep.verdict.note += "; saturation gave up: " + std::string(e.what());
        }
      }
      break;
    case Algo::Saturation:
      try {
        rep.verdict = tc_saturation(inst);
      } catch (const StateSpaceTooLarge& e) {
        if (allow_bruteforce) throw;
        throw NoApplicableAlgorithm(std::string("saturation gave up and brute force is disabled: ") + e.what());
      }
      break;
    case Algo::Auto: break;
  }
  return rep;
}

}  // namespace xtc

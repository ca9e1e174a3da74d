// One PASS/FAIL line per acceptance criterion. Oracles here are written independently of the library.
#include <array>
#include <chrono>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xtc/error.hpp"
#include "xtc/genbench.hpp"
#include "xtc/instance_io.hpp"
#include "xtc/linarith.hpp"
#include "xtc/typecheck.hpp"

using namespace xtc;

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); }
bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;
  void fail(const std::string& why) {
    ok = false;
    if (problems.size() < 5) problems.push_back(why);
  }
};

int failures = 0;

void report(int n, const std::string& name, const std::function<void(Outcome&)>& body, double budget_s) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  if (!o.ok) ++failures;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", secs);
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.detail << " [" << buf
            << "]\n";
  for (const auto& p : o.problems) std::cout << "    " << p << "\n";
  std::cout.flush();
}

// ---------------------------------------------------------------- criterion 1

Transducer nesting() {
  Transducer t({"p", "q"}, Alphabet({"a", "b", "c", "d", "e"}), "p");
  t.add_rule("p", "a", parse_rhs("d(e)"));
  t.add_rule("p", "b", parse_rhs("d($q)"));
  t.add_rule("q", "a", parse_rhs("c $p"));
  t.add_rule("q", "b", parse_rhs("c($p $q)"));
  return t;
}

void worked_examples(Outcome& o) {
  int checks = 0;
  auto expect = [&](bool c, const std::string& what) {
    ++checks;
    if (!c) o.fail(what);
  };
  Tree out = apply(nesting(), parse_tree("b(b b(a b) a(b))"));
  expect(to_string(out) == "d(c c(d(e) d c c) c d)", "example transducer output: " + to_string(out));

  Alphabet s({"store", "dvd", "title", "price", "discount"});
  Dtd store(s, "store");
  store.set_content("store", LangRep::from_regex(parse_regex("dvd dvd*"), s));
  store.set_content("dvd", LangRep::from_regex(parse_regex("title price (discount + eps)"), s));
  for (const char* leaf : {"title", "price", "discount"}) store.set_content(leaf, LangRep::from_regex(Regex::epsilon(), s));
  expect(bool(dtd_validate(store, parse_tree("store(dvd(title price) dvd(title price) dvd(title price discount))"))),
         "store tree rejected");

  Alphabet qs({"q_true", "q_false"});
  NtAutomaton b(qs, Alphabet({"and", "or", "not", "true", "false"}));
  auto set = [&](const char* q, const char* a, const char* r) {
    b.set_transition(q, a, LangRep::from_regex(parse_regex(r), qs));
  };
  set("q_true", "true", "eps");
  set("q_false", "false", "eps");
  set("q_true", "and", "q_true q_true*");
  set("q_false", "and", "(q_true + q_false)* q_false (q_true + q_false)*");
  set("q_true", "or", "(q_true + q_false)* q_true (q_true + q_false)*");
  set("q_false", "or", "q_false q_false*");
  set("q_true", "not", "q_false");
  set("q_false", "not", "q_true");
  b.set_final("q_true");
  NtaRun r = nta_membership(b, parse_tree("and(or(false not(false) false) and(true) or(false false true))"));
  expect(r.accepted && r.run && r.run->state == "q_true", "boolean tree not accepted with root q_true");
  expect(!nta_membership(b, parse_tree("false")).accepted, "leaf false accepted");

  TransducerAnalysis an = analyze(nesting());
  expect(!an.nondeleting && an.copying_width == 2, "analysis of the example transducer");
  o.detail = std::to_string(checks) + " checks";
}

// ---------------------------------------------------------------- criterion 2 oracles

bool product_empty(const std::vector<Dfa>& ms) {
  using Tuple = std::vector<StateId>;
  Tuple init;
  for (const Dfa& m : ms) init.push_back(m.initial());
  std::set<Tuple> seen{init};
  std::deque<Tuple> todo{init};
  while (!todo.empty()) {
    Tuple t = todo.front();
    todo.pop_front();
    bool all = true;
    for (std::size_t i = 0; i < ms.size(); ++i) all = all && ms[i].is_final(t[i]);
    if (all) return false;
    for (SymbolId c = 0; c < ms[0].alphabet().size(); ++c) {
      Tuple n;
      bool dead = false;
      for (std::size_t i = 0; i < ms.size(); ++i) {
        n.push_back(ms[i].next(t[i], c));
        dead = dead || n.back() == kNoState;
      }
      if (!dead && seen.insert(n).second) todo.push_back(n);
    }
  }
  return true;
}

bool subset_universal(const Nfa& a) {
  using Set = std::set<StateId>;
  Set init(a.initial().begin(), a.initial().end());
  std::set<Set> seen{init};
  std::deque<Set> todo{init};
  while (!todo.empty()) {
    Set s = todo.front();
    todo.pop_front();
    bool fin = false;
    for (StateId q : s) fin = fin || a.is_final(q);
    if (!fin) return false;
    for (SymbolId c = 0; c < a.alphabet().size(); ++c) {
      Set n;
      for (StateId q : s)
        for (StateId p : a.successors(q, c)) n.insert(p);
      if (seen.insert(n).second) todo.push_back(n);
    }
  }
  return true;
}

bool reach_empty(const Nfa& a) {
  std::set<StateId> seen(a.initial().begin(), a.initial().end());
  std::deque<StateId> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    StateId q = todo.front();
    todo.pop_front();
    if (a.is_final(q)) return false;
    for (SymbolId c = 0; c < a.alphabet().size(); ++c)
      for (StateId p : a.successors(q, c))
        if (seen.insert(p).second) todo.push_back(p);
  }
  return true;
}

// ≥ 2 rows, bottom row first; every row respects H, consecutive rows respect V column-wise.
bool tiling_solvable(const TilingSystem& s) {
  const std::size_t n = s.width();
  auto h_ok = [&](const std::vector<Label>& r) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!s.horizontal.count({r[i], r[i + 1]})) return false;
    return true;
  };
  std::vector<std::vector<Label>> rows{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<Label>> next;
    for (const auto& r : rows)
      for (const Label& t : s.tiles) {
        auto x = r;
        x.push_back(t);
        next.push_back(x);
      }
    rows = next;
  }
  if (!h_ok(s.bottom)) return false;
  std::set<std::vector<Label>> frontier{s.bottom}, seen;
  while (!frontier.empty()) {
    std::set<std::vector<Label>> next;
    for (const auto& below : frontier)
      for (const auto& r : rows) {
        bool ok = h_ok(r);
        for (std::size_t i = 0; ok && i < n; ++i) ok = s.vertical.count({below[i], r[i]}) > 0;
        if (!ok) continue;
        if (r == s.top) return true;
        if (seen.insert(r).second) next.insert(r);
      }
    frontier = next;
  }
  return false;
}

// Smallest depth of a tree accepted by every automaton, 0 when the intersection is empty.
std::size_t tdbta_product_min_depth(const std::vector<TdbtAutomaton>& as) {
  using Tuple = std::vector<Label>;
  std::map<Tuple, std::size_t> layer;
  std::vector<Tuple> all{{}};
  for (const auto& a : as) {
    std::vector<Tuple> next;
    for (const auto& t : all)
      for (const Label& q : a.states()) {
        auto x = t;
        x.push_back(q);
        next.push_back(x);
      }
    all = next;
  }
  std::vector<Label> labels = kTdbtaInternal;
  labels.insert(labels.end(), kTdbtaLeaves.begin(), kTdbtaLeaves.end());
  for (std::size_t d = 1; d <= all.size() + 1; ++d) {
    std::vector<Tuple> fresh;
    for (const auto& t : all) {
      if (layer.count(t)) continue;
      for (const Label& l : labels) {
        std::vector<const std::vector<Label>*> rs;
        for (std::size_t i = 0; i < as.size(); ++i) rs.push_back(as[i].transition(t[i], l));
        bool ok = true;
        for (auto* r : rs) ok = ok && r && r->size() == rs[0]->size();
        if (!ok) continue;
        for (std::size_t c = 0; ok && c < rs[0]->size(); ++c) {
          Tuple child;
          for (auto* r : rs) child.push_back((*r)[c]);
          auto it = layer.find(child);
          ok = it != layer.end() && it->second < d;
        }
        if (ok) {
          fresh.push_back(t);
          break;
        }
      }
    }
    for (const auto& t : fresh) layer[t] = d;
  }
  Tuple start;
  for (const auto& a : as) start.push_back(a.start());
  auto it = layer.find(start);
  return it == layer.end() ? 0 : it->second;
}

Dfa random_dfa(Rng& rng, std::size_t n) {
  Dfa d(binary_alphabet(), n);
  for (StateId q = 0; q < n; ++q) {
    d.set_final(q, coin(rng, 0.35));
    for (SymbolId c = 0; c < 2; ++c)
      if (coin(rng, 0.85)) d.set_transition(q, c, StateId(rng() % n));
  }
  return d;
}

Nfa random_nfa(Rng& rng, std::size_t n, std::size_t max_succ, double density, double final_p) {
  Nfa a(binary_alphabet(), n);
  a.add_initial(0);
  if (n > 1 && max_succ >= 2 && coin(rng, 0.2)) a.add_initial(StateId(1 + rng() % (n - 1)));
  for (StateId q = 0; q < n; ++q) {
    a.set_final(q, coin(rng, final_p));
    for (SymbolId c = 0; c < 2; ++c) {
      std::set<StateId> succ;
      for (StateId p = 0; p < n; ++p)
        if (succ.size() < max_succ && coin(rng, density)) succ.insert(p);
      for (StateId p : succ) a.add_transition(q, c, p);
    }
  }
  return a;
}

TdbtAutomaton random_ranked_tdbta(Rng& rng, std::size_t n, const std::string& prefix) {
  std::vector<Label> qs;
  for (std::size_t i = 0; i < n; ++i) qs.push_back(prefix + std::to_string(i));
  TdbtAutomaton a(qs, kTdbtaInternal, kTdbtaLeaves, qs[0]);
  for (const Label& q : qs) {
    if (coin(rng, 0.6)) a.set_transition(q, "b0", {qs[rng() % n], qs[rng() % n]});
    if (coin(rng, 0.5)) a.set_transition(q, "b1", {qs[rng() % n]});
    for (const Label& l : kTdbtaLeaves)
      if (coin(rng, 0.45)) a.set_transition(q, l, {});
  }
  return a;
}

TilingSystem random_tiling(Rng& rng) {
  TilingSystem s;
  std::size_t k = pick(rng, 1, 3), n = pick(rng, 2, 3);
  for (std::size_t i = 0; i < k; ++i) s.tiles.push_back("x" + std::to_string(i));
  for (const auto& a : s.tiles)
    for (const auto& b : s.tiles) {
      if (coin(rng, 0.6)) s.horizontal.insert({a, b});
      if (coin(rng, 0.5)) s.vertical.insert({a, b});
    }
  for (std::size_t i = 0; i < n; ++i) {
    s.bottom.push_back(s.tiles[rng() % k]);
    s.top.push_back(s.tiles[rng() % k]);
  }
  return s;
}

struct Tally {
  std::size_t total = 0, positive = 0;
};

void generators(Outcome& o) {
  Rng rng(2024);
  std::map<std::string, Tally> tally;
  auto check = [&](const std::string& kind, const GeneratedInstance& g, bool oracle) {
    Tally& t = tally[kind];
    ++t.total;
    if (oracle) ++t.positive;
    if (g.ground_truth != oracle) o.fail(kind + ": generator ground truth disagrees with the test oracle");
    TypecheckReport r = typecheck(g.instance);
    auto want = oracle ? Verdict::Kind::Typechecks : Verdict::Kind::Counterexample;
    if (r.verdict.kind != want)
      o.fail(kind + ": verdict " + to_string(r.verdict.kind) + " via " + to_string(r.used) + ", oracle says " +
             (oracle ? "typechecks" : "fails"));
    if (r.verdict.counterexample && !validate_counterexample(g.instance, r.verdict.counterexample->input))
      o.fail(kind + ": counterexample does not validate");
  };

  for (int i = 0; i < 60; ++i) {
    std::vector<Dfa> ms;
    for (std::size_t k = pick(rng, 2, 3); k > 0; --k) ms.push_back(random_dfa(rng, pick(rng, 1, 4)));
    check("dfa-intersection", gen_dfa_intersection(ms), product_empty(ms));
  }
  for (int i = 0; i < 60; ++i) {
    Nfa a = random_nfa(rng, pick(rng, 1, 4), 4, 0.55, 0.7);
    check("nfa-universality", gen_nfa_universality(a), subset_universal(a));
  }
  for (int i = 0; i < 60; ++i) {
    Nfa a = random_nfa(rng, pick(rng, 1, 6), 2, 0.25, 0.3);
    check("nfa-emptiness", gen_nfa_emptiness_deg2(a), reach_empty(a));
  }
  for (int i = 0; i < 60; ++i) {
    TilingSystem s = random_tiling(rng);
    check("tiling", gen_tiling(s), !tiling_solvable(s));
  }
  for (int i = 0; i < 60; ++i) {
    std::vector<TdbtAutomaton> as{random_ranked_tdbta(rng, pick(rng, 1, 3), "p"),
                                  random_ranked_tdbta(rng, pick(rng, 1, 3), "q")};
    check("tdbta-nondeleting", gen_tdbta_intersection(as, TdbtaMode::Nondeleting), tdbta_product_min_depth(as) == 0);
  }

  // deleting mode: every failing instance must have a brute-force counterexample of depth 1 + L + depth(witness)
  std::size_t found = 0, skipped = 0, failing = 0, del_total = 0;
  for (int i = 0; i < 60; ++i) {
    std::vector<TdbtAutomaton> as{random_ranked_tdbta(rng, pick(rng, 1, 3), "p"),
                                  random_ranked_tdbta(rng, pick(rng, 1, 3), "q")};
    GeneratedInstance g = gen_tdbta_intersection(as, TdbtaMode::Deleting);
    std::size_t wd = tdbta_product_min_depth(as);
    ++del_total;
    if (g.ground_truth != (wd == 0)) o.fail("tdbta-deleting: ground truth disagrees with the test oracle");
    if (wd == 0) continue;
    ++failing;
    if (wd > 3) {
      ++skipped;
      continue;
    }
    Bounds b{1 + ceil_log2(as.size()) + wd, 2, 2'000'000};
    Verdict v = tc_bruteforce(g.instance, b);
    if (v.kind != Verdict::Kind::Counterexample) {
      o.fail("tdbta-deleting: brute force within depth " + std::to_string(b.max_depth) + " found no counterexample");
    } else {
      ++found;
      if (!validate_counterexample(g.instance, v.counterexample->input))
        o.fail("tdbta-deleting: counterexample does not validate");
    }
  }

  std::ostringstream d;
  for (const auto& [k, t] : tally) d << k << " " << t.total << " (" << t.positive << " typecheck), ";
  d << "tdbta-deleting " << del_total << " (" << failing << " failing, " << found << " brute-force hits, " << skipped
    << " skipped: witness depth > 3)";
  o.detail = d.str();
}

// ---------------------------------------------------------------- criterion 3

void differential(Outcome& o) {
  std::size_t cex = 0, brute_cex = 0, brute_gave_up = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance inst = gen_random_instance(seed, dfa_profile());
    Verdict a = tc_fixed_input_dfa_bc(inst);
    Verdict b = tc_fixed_io_nfa(inst);
    if (a.kind != b.kind) {
      o.fail("seed " + std::to_string(seed) + ": dfa-bc says " + to_string(a.kind) + ", io-nfa says " +
             to_string(b.kind));
      continue;
    }
    for (const Verdict* v : {&a, &b})
      if (v->counterexample && !validate_counterexample(inst, v->counterexample->input))
        o.fail("seed " + std::to_string(seed) + ": counterexample fails validation");
    if (a.kind == Verdict::Kind::Counterexample) ++cex;
    Verdict c;
    try {
      c = tc_bruteforce(inst, Bounds{4, 3});
    } catch (const BoundsTooLarge&) {
      ++brute_gave_up;
      continue;
    }
    if (c.kind == Verdict::Kind::Counterexample) {
      ++brute_cex;
      if (a.kind != Verdict::Kind::Counterexample)
        o.fail("seed " + std::to_string(seed) + ": brute force found a counterexample the specialized algorithms missed");
    }
    if (c.kind == Verdict::Kind::Typechecks && a.kind != Verdict::Kind::Typechecks)
      o.fail("seed " + std::to_string(seed) + ": exhaustive brute force typechecks, specialized does not");
  }
  o.detail = "300 instances, " + std::to_string(cex) + " counterexamples, brute force found " +
             std::to_string(brute_cex) + " (enumeration cap hit on " + std::to_string(brute_gave_up) + ")";
}

// ---------------------------------------------------------------- criterion 4

struct SlGen {
  std::vector<Label> sigma;
  std::size_t k;
  SlFormula operator()(Rng& rng, int depth) const {
    if (depth == 0 || coin(rng, 0.3)) {
      if (coin(rng, 0.05)) return SlFormula::truth();
      const Label& a = sigma[rng() % sigma.size()];
      std::uint64_t i = pick(rng, 0, k);
      return coin(rng, 0.5) ? SlFormula::eq(a, i) : SlFormula::ge(a, i);
    }
    switch (rng() % 3) {
      case 0: return SlFormula::negate((*this)(rng, depth - 1));
      case 1: return SlFormula::conj({(*this)(rng, depth - 1), (*this)(rng, depth - 1)});
      default: return SlFormula::disj({(*this)(rng, depth - 1), (*this)(rng, depth - 1)});
    }
  }
};

// Direct evaluation on a count vector indexed like sigma.
bool sl_holds(const SlFormula& f, const std::vector<Label>& sigma, const std::vector<std::uint64_t>& n) {
  switch (f.kind()) {
    case SlFormula::Kind::True: return true;
    case SlFormula::Kind::Eq:
    case SlFormula::Kind::Ge: {
      std::size_t i = std::find(sigma.begin(), sigma.end(), f.symbol()) - sigma.begin();
      std::uint64_t c = i < n.size() ? n[i] : 0;
      return f.kind() == SlFormula::Kind::Eq ? c == f.count() : c >= f.count();
    }
    case SlFormula::Kind::Not: return !sl_holds(f.parts()[0], sigma, n);
    case SlFormula::Kind::And:
      for (const auto& g : f.parts())
        if (!sl_holds(g, sigma, n)) return false;
      return true;
    case SlFormula::Kind::Or:
      for (const auto& g : f.parts())
        if (sl_holds(g, sigma, n)) return true;
      return false;
  }
  return false;
}

// Walks every string up to max_len; the formula only sees counts, which are kept incrementally.
bool some_string_satisfies(const SlFormula& f, const std::vector<Label>& sigma, std::size_t max_len) {
  std::vector<std::uint64_t> n(sigma.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t len) {
    if (sl_holds(f, sigma, n)) return true;
    if (len == max_len) return false;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      ++n[i];
      bool r = go(len + 1);
      --n[i];
      if (r) return true;
    }
    return false;
  };
  return go(0);
}

void sl_engine(Outcome& o) {
  Rng rng(77);
  const std::vector<Label> names{"a", "b", "c"};
  std::size_t pumped_changed = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<Label> sigma(names.begin(), names.begin() + pick(rng, 1, 3));
    SlFormula f = SlGen{sigma, pick(rng, 0, 4)}(rng, 3);
    std::uint64_t k = sl_max_int(f);
    Word w;
    for (std::size_t len = pick(rng, 0, 12); len > 0; --len) w.push_back(sigma[rng() % sigma.size()]);
    ParikhVector pw = parikh(w);
    Word w2;
    for (const Label& a : sigma) {
      std::uint64_t c = pw.count(a) ? pw[a] : 0;
      if (c > k) {
        c = k + 1 + rng() % 6;
        ++pumped_changed;
      }
      for (std::uint64_t j = 0; j < c; ++j) w2.push_back(a);
    }
    std::shuffle(w2.begin(), w2.end(), rng);
    if (sl_eval(f, pw) != sl_eval(f, parikh(w2)))
      o.fail("pumping: " + to_string(f) + " separates the two strings");
  }
  std::size_t sat = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Label> sigma(names.begin(), names.begin() + pick(rng, 1, 3));
    SlFormula f = SlGen{sigma, pick(rng, 0, 3)}(rng, 3);
    std::size_t k = sl_max_int(f);
    std::set<Label> allowed(sigma.begin(), sigma.end());
    auto v = sl_sat(f, allowed);
    bool oracle = some_string_satisfies(f, sigma, (k + 1) * sigma.size());
    if (v.has_value() != oracle) o.fail("sl_sat disagrees with enumeration on " + to_string(f));
    if (v) {
      ++sat;
      std::vector<std::uint64_t> n;
      for (const Label& a : sigma) n.push_back(v->count(a) ? v->at(a) : 0);
      if (!sl_holds(f, sigma, n)) o.fail("sl_sat witness does not satisfy " + to_string(f));
    }
  }
  o.detail = "500 pumping triples, 200 sl_sat formulas (" + std::to_string(sat) + " satisfiable)";
}

// ---------------------------------------------------------------- criterion 5

LinTerm random_term(Rng& rng, const std::vector<std::string>& vars, int cmin, int cmax, int kmax) {
  LinTerm t(Rational(long(pick(rng, 0, 2 * kmax)) - kmax));
  for (const auto& x : vars)
    if (coin(rng, 0.7)) t += LinTerm::var(x, Rational(long(pick(rng, 0, cmax - cmin)) + cmin));
  return t;
}

Formula random_formula(Rng& rng, const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || coin(rng, 0.35)) {
    static const char* ops[] = {"<", ">", "=", "<=", ">="};
    LinTerm lhs = random_term(rng, vars, -5, 5, 0);
    if (lhs.is_constant()) lhs += LinTerm::var(vars[rng() % vars.size()], 1);
    LinTerm rhs(Rational(long(pick(rng, 0, 20)) - 10, long(pick(rng, 1, 3))));
    return Formula::compare(lhs, ops[rng() % 5], rhs);
  }
  switch (rng() % 3) {
    case 0: return !random_formula(rng, vars, depth - 1);
    case 1: return random_formula(rng, vars, depth - 1) && random_formula(rng, vars, depth - 1);
    default: return random_formula(rng, vars, depth - 1) || random_formula(rng, vars, depth - 1);
  }
}

// Values of y at which some atom changes truth, given x.
std::vector<Rational> thresholds(const Formula& f, const Assignment& at, const std::string& y) {
  std::vector<Rational> out;
  for (const LinAtom& a : atoms(f)) {
    Rational c = a.term.coefficient(y);
    if (c == 0) continue;
    Rational rest = a.term.constant();
    for (const auto& [x, k] : a.term.coefficients())
      if (x != y) rest += k * at.at(x);
    out.push_back(-rest / c);
  }
  return out;
}

bool exists_y(const Formula& f, Assignment at, const std::string& y) {
  std::vector<Rational> ts = thresholds(f, at, y);
  std::vector<Rational> cands;
  if (ts.empty()) {
    cands.push_back(0);
  } else {
    Rational lo = ts[0], hi = ts[0];
    for (const auto& t : ts) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    cands.push_back(lo - 1);
    cands.push_back(hi + 1);
    for (const auto& a : ts)
      for (const auto& b : ts) cands.push_back((a + b) / 2);
  }
  for (const auto& c : cands) {
    at[y] = c;
    if (eval(f, at)) return true;
  }
  return false;
}

void linear_arithmetic(Outcome& o) {
  Rng rng(5150);
  // (a) counting systems against the widened box
  std::size_t feasible = 0;
  for (int i = 0; i < 500; ++i) {
    CountingSystem s;
    std::size_t n = pick(rng, 1, 3);
    std::uint64_t k_in = pick(rng, 0, 2);
    for (std::size_t j = 0; j < n; ++j) {
      std::string x = "x" + std::to_string(j);
      s.vars.push_back(x);
      if (coin(rng, 0.4))
        s.fixed[x] = pick(rng, 0, k_in);
      else
        s.above[x] = k_in;
    }
    std::uint64_t i_out_max = 0;
    std::function<Formula(int)> phi2 = [&](int depth) -> Formula {
      if (depth == 0 || coin(rng, 0.4)) {
        LinTerm t;
        for (const auto& x : s.vars)
          if (coin(rng, 0.7)) t += LinTerm::var(x, long(pick(rng, 1, 2)));
        if (t.is_constant()) t += LinTerm::var(s.vars[0], 1);
        t += LinTerm(long(pick(rng, 0, 2)));
        std::uint64_t c = pick(rng, 0, 7);
        i_out_max = std::max(i_out_max, c);
        static const char* ops[] = {">=", "=", ">"};
        return Formula::compare(t, ops[rng() % 3], LinTerm(long(c)));
      }
      switch (rng() % 3) {
        case 0: return !phi2(depth - 1);
        case 1: return phi2(depth - 1) && phi2(depth - 1);
        default: return phi2(depth - 1) || phi2(depth - 1);
      }
    };
    s.phi2 = phi2(2);
    auto got = counting_feasible(s, k_in, i_out_max);
    std::int64_t hi = std::int64_t(std::max(k_in, i_out_max)) + 1 + 5;
    Box box;
    for (const auto& x : s.vars) box[x] = {0, hi};
    auto want = integer_feasible_box(s.target(), box);
    if (got.has_value() != want.has_value()) o.fail("counting system " + to_string(s.target()) + ": disagreement");
    if (got) {
      ++feasible;
      if (!eval(s.target(), *got)) o.fail("counting witness does not satisfy " + to_string(s.target()));
    }
  }
  // (b) cell search against a box that holds every solution
  std::size_t cells_sat = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> vars;
    for (std::size_t j = pick(rng, 1, 3); j > 0; --j) vars.push_back("v" + std::to_string(j));
    Formula f = random_formula(rng, vars, 2);
    Box box;
    for (const auto& x : vars) {
      long b = long(pick(rng, 2, 20));
      f = f && Formula::compare(LinTerm::var(x), ">=", LinTerm(-b)) &&
          Formula::compare(LinTerm::var(x), "<=", LinTerm(b));
      box[x] = {-20, 20};
    }
    IntResult r = integer_feasible_cells(f);
    auto want = integer_feasible_box(f, box);
    if (r.status == Feasibility::Unknown)
      o.fail("cells returned unknown on " + to_string(f) + ": " + r.note);
    else if ((r.status == Feasibility::Feasible) != want.has_value())
      o.fail("cells disagree with the box on " + to_string(f));
    if (r.status == Feasibility::Feasible) {
      ++cells_sat;
      if (!eval(f, r.witness)) o.fail("cell witness does not satisfy " + to_string(f));
    }
  }
  // (c) elimination against the candidate-point oracle
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> vars{"x", "y"};
    if (coin(rng, 0.2)) vars = {"y"};
    Formula f = random_formula(rng, vars, 3);
    Formula g = qe_eliminate(f, "y");
    if (variables(g).count("y")) o.fail("y survives elimination in " + to_string(g));
    for (int p = 0; p < 50; ++p) {
      Assignment at{{"x", Rational(long(pick(rng, 0, 60)) - 30, long(pick(rng, 1, 4)))}};
      if (eval(g, at) != exists_y(f, at, "y")) {
        o.fail("elimination wrong for " + to_string(f) + " at x = " + to_string(at["x"]));
        break;
      }
    }
  }
  o.detail = "500 counting systems (" + std::to_string(feasible) + " feasible), 200 cell formulas (" +
             std::to_string(cells_sat) + " feasible), 200 x 50 elimination samples";
}

// ---------------------------------------------------------------- criterion 6

Dtd random_dtd(Rng& rng) {
  Alphabet s({"a", "b", "c"});
  Dtd d(s, "a");
  for (SymbolId a = 0; a < 3; ++a) {
    std::size_t n = pick(rng, 1, 3);
    Dfa m(s, n);
    for (StateId q = 0; q < n; ++q) {
      m.set_final(q, coin(rng, 0.6));
      for (SymbolId c = 0; c < 3; ++c)
        if (coin(rng, 0.5)) m.set_transition(q, c, StateId(rng() % n));
    }
    d.set_content(s.symbol(a), LangRep::from_dfa(m));
  }
  return d;
}

// Trees of L(d) with depth ≤ D and at most W children per node, as strings. False when over `cap`.
bool enumerate_language(const Dtd& d, std::size_t D, std::size_t W, std::size_t cap, std::set<std::string>& out) {
  const Alphabet& s = d.alphabet();
  std::vector<SymbolWord> words{{}};
  for (std::size_t len = 0, lo = 0; len < W; ++len) {
    std::size_t hi = words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (SymbolId c = 0; c < s.size(); ++c) {
        auto w = words[i];
        w.push_back(c);
        words.push_back(w);
      }
    lo = hi;
  }
  std::vector<std::vector<std::string>> by(s.size());  // trees of depth ≤ current level
  for (std::size_t level = 1; level <= D; ++level) {
    std::vector<std::vector<std::string>> next(s.size());
    for (SymbolId a = 0; a < s.size(); ++a)
      for (const auto& w : words) {
        if (!d.content(a).accepts(w)) continue;
        std::vector<std::string> acc{""};
        for (SymbolId c : w) {
          std::vector<std::string> grown;
          if (acc.size() * by[c].size() > cap) return false;
          for (const auto& prefix : acc)
            for (const auto& t : by[c]) grown.push_back(prefix.empty() ? t : prefix + " " + t);
          acc.swap(grown);
        }
        for (const auto& kids : acc) next[a].push_back(w.empty() ? s.symbol(a) : s.symbol(a) + "(" + kids + ")");
        if (next[a].size() > cap) return false;
      }
    by.swap(next);
  }
  out.insert(by[d.start_id()].begin(), by[d.start_id()].end());
  return true;
}

TdbtAutomaton random_tdbta(Rng& rng) {
  std::size_t n = pick(rng, 1, 3);
  std::vector<Label> qs;
  for (std::size_t i = 0; i < n; ++i) qs.push_back("s" + std::to_string(i));
  TdbtAutomaton a(qs, {"f", "g", "h"}, {"a", "b"}, qs[0]);
  for (const Label& q : qs) {
    for (const char* l : {"f", "g", "h"})
      if (coin(rng, 0.6)) {
        if (coin(rng, 0.5))
          a.set_transition(q, l, {qs[rng() % n]});
        else
          a.set_transition(q, l, {qs[rng() % n], qs[rng() % n]});
      }
    for (const char* l : {"a", "b"})
      if (coin(rng, 0.6)) a.set_transition(q, l, {});
  }
  return a;
}

std::vector<Node> ranked_trees(std::size_t depth) {
  std::vector<Node> cur;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Node> next{leaf("a"), leaf("b")};
    for (const char* f : {"f", "g", "h"}) {
      for (const Node& c : cur) next.push_back(Node{f, {c}});
      for (const Node& l : cur)
        for (const Node& r : cur) next.push_back(Node{f, {l, r}});
    }
    cur.swap(next);
  }
  return cur;
}

// Trees accepted from state q with depth ≤ d, generated top-down.
std::vector<Node> accepted_from(const TdbtAutomaton& a, const Label& q, std::size_t d,
                                std::map<std::pair<Label, std::size_t>, std::vector<Node>>& memo) {
  if (d == 0) return {};
  auto key = std::make_pair(q, d);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<Node> out;
  for (const auto& [k, rhs] : a.transitions()) {
    if (k.first != q) continue;
    if (rhs.empty()) {
      out.push_back(leaf(k.second));
    } else if (rhs.size() == 1) {
      for (const Node& c : accepted_from(a, rhs[0], d - 1, memo)) out.push_back(Node{k.second, {c}});
    } else {
      auto ls = accepted_from(a, rhs[0], d - 1, memo);
      auto rs = accepted_from(a, rhs[1], d - 1, memo);
      for (const Node& l : ls)
        for (const Node& r : rs) out.push_back(Node{k.second, {l, r}});
    }
  }
  memo[key] = out;
  return out;
}

// Inverse of the block code; nullopt if n is not an encoded tree.
std::optional<Node> decode(const Alphabet& sigma, std::size_t k, const Node& n, const TdbtAutomaton& b) {
  const Node* cur = &n;
  std::string bits;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if ((cur->label != "b0" && cur->label != "b1") || cur->children.size() != 1) return std::nullopt;
    bits += cur->label[1];
    cur = &cur->children[0];
  }
  const Label& last = cur->label;
  bool primed = last.size() == 3 && last[2] == '\'';
  if (last.size() < 2 || (last[1] != '0' && last[1] != '1')) return std::nullopt;
  bits += last[1];
  std::size_t idx = std::stoul(bits, nullptr, 2);
  if (idx >= sigma.size()) return std::nullopt;
  const Label& a = sigma.symbol(SymbolId(idx));
  if (primed != b.is_leaf_label(a) || primed != cur->children.empty()) return std::nullopt;
  Node out{a, {}};
  for (const Node& c : cur->children) {
    auto d = decode(sigma, k, c, b);
    if (!d) return std::nullopt;
    out.children.push_back(*d);
  }
  return out;
}

void schema_algorithms(Outcome& o) {
  Rng rng(31337);
  std::size_t done = 0, redraws = 0, empty = 0, trees = 0;
  while (done < 100) {
    Dtd d = random_dtd(rng);
    std::set<std::string> before;
    if (!enumerate_language(d, 4, 3, 200000, before)) {
      ++redraws;
      continue;
    }
    ++done;
    DtdEmptiness e = dtd_empty(d);
    if (!e.empty && !dtd_validate(d, e.witness)) o.fail("emptiness witness " + to_string(e.witness) + " invalid");
    if (e.empty && !before.empty()) o.fail("dtd_empty says empty but trees exist");
    if (e.empty) {
      ++empty;
      bool threw = false;
      try {
        dtd_reduce(d);
      } catch (const EmptyLanguage&) {
        threw = true;
      }
      if (!threw) o.fail("reducing an empty DTD did not fail");
      continue;
    }
    Dtd r = dtd_reduce(d);
    std::set<std::string> after;
    if (!enumerate_language(r, 4, 3, 200000, after)) {
      o.fail("reduced DTD has more trees than the original");
      continue;
    }
    trees += before.size();
    if (before != after) o.fail("reduction changed the language (" + std::to_string(before.size()) + " vs " +
                                std::to_string(after.size()) + " trees)");
  }

  std::size_t checked = 0, image = 0;
  for (int i = 0; i < 50; ++i) {
    TdbtAutomaton b = random_tdbta(rng);
    TdbtAutomaton e = encode_tdbta(b);
    Alphabet sigma = tdbta_alphabet(b);
    std::size_t k = code_length(sigma);
    for (const Node& t : ranked_trees(3)) {
      ++checked;
      if (tdbta_membership(b, t) != tdbta_membership(e, enc_tree(sigma, t)))
        o.fail("enc(t) membership differs for " + to_string(t));
    }
    std::map<std::pair<Label, std::size_t>, std::vector<Node>> memo;
    for (const Node& t : accepted_from(e, e.start(), 3 * k, memo)) {
      ++image;
      auto dec = decode(sigma, k, t, b);
      if (!dec)
        o.fail("encoded automaton accepts " + to_string(t) + ", which is not an encoding");
      else if (!tdbta_membership(b, *dec) || to_string(enc_tree(sigma, *dec)) != to_string(t))
        o.fail("encoded automaton accepts the encoding of a rejected tree " + to_string(*dec));
    }
  }
  o.detail = "100 DTDs (" + std::to_string(empty) + " empty, " + std::to_string(trees) + " trees compared, " +
             std::to_string(redraws) + " redrawn for size), 50 TDBTAs (" + std::to_string(checked) +
             " trees encoded, " + std::to_string(image) + " accepted encodings decoded)";
}

// ---------------------------------------------------------------- criterion 7

struct Run {
  std::string out;
  int code = -1;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + XTC_CLI + "\" " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

void reproducibility(Outcome& o) {
  const std::string ex = XTC_EXAMPLES_DIR;
  const std::string tmp = XTC_WORK_DIR;
  std::vector<std::string> cmds{
      "generate random --seed 42 --profile dfa",
      "generate random --seed 42 --profile sl",
      "generate dfa-intersection --dfas " + ex + "/m1.nfa " + ex + "/m2.nfa",
      "generate tdbta-intersection --tdbtas " + ex + "/left-b1.tdbta " + ex + "/leaf-only.tdbta --mode deleting",
      "generate tiling --tiling " + ex + "/stripes.tiling",
      "typecheck " + ex + "/boolean.tcheck --json",
      "typecheck " + ex + "/nesting.tcheck",
      "typecheck " + ex + "/store.tcheck --algo fixed-io-nfa --json",
      "linarith \"x + 2*y > 3 & x < 1\"",
  };
  for (int s = 1; s <= 5; ++s) {
    std::string f = tmp + "/repro_" + std::to_string(s) + ".tcheck";
    cmds.push_back("generate random --seed " + std::to_string(s) + " --profile dfa --out " + f + " && \"" + XTC_CLI +
                   "\" typecheck " + f + " --json");
  }
  for (const auto& c : cmds) {
    Run a = run_cli(c), b = run_cli(c);
    if (a.code < 0 || a.code == 3) o.fail("`" + c + "` failed: " + a.out.substr(0, 200));
    if (a.out != b.out || a.code != b.code) o.fail("`" + c + "` differs between runs");
  }
  o.detail = std::to_string(cmds.size()) + " commands run twice, outputs compared byte for byte";
}

}  // namespace

int main() {
  report(1, "worked examples", worked_examples, 1.0);
  report(2, "generator ground truth", generators, 120.0);
  report(3, "differential suite", differential, 300.0);
  report(4, "SL engine", sl_engine, 60.0);
  report(5, "linear arithmetic", linear_arithmetic, 120.0);
  report(6, "schema algorithms", schema_algorithms, 180.0);
  report(7, "reproducibility", reproducibility, 60.0);
  return failures == 0 ? 0 : 1;
}

#include "xtc/genbench.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "xtc/error.hpp"

namespace xtc {

namespace {

Dfa dfa_of(const std::string& regex, const Alphabet& sigma) {
  return determinize(regex_to_nfa(parse_regex(regex), sigma));
}

LangRep dfa_rep(const std::string& regex, const Alphabet& sigma) { return LangRep::from_dfa(dfa_of(regex, sigma)); }

std::string join(const std::vector<Label>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

Rhs rhs(const std::string& text) { return parse_rhs(text); }

void check_binary(const Alphabet& a, const char* what) {
  if (a.size() != 2 || !a.contains("b0") || !a.contains("b1"))
    throw SemanticError(std::string(what) + " must be over the alphabet {b0, b1}");
}

std::string bits_of(std::size_t v, std::size_t len) {
  std::string s(len, '0');
  for (std::size_t i = 0; i < len; ++i)
    if (v >> (len - 1 - i) & 1) s[i] = '1';
  return s;
}

}  // namespace

Alphabet binary_alphabet() { return Alphabet({"b0", "b1"}); }

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

GeneratedInstance gen_dfa_intersection(const std::vector<Dfa>& ms) {
  if (ms.empty()) throw SemanticError("dfa-intersection needs at least one automaton");
  for (const Dfa& m : ms) check_binary(m.alphabet(), "intersection automata");
  const std::size_t n = ms.size();
  std::vector<Label> labels{"s", "b0", "b1"};
  for (std::size_t i = 0; i <= n; ++i) labels.push_back("hash" + std::to_string(i));
  Alphabet sigma(labels);

  Dtd din(sigma, "s");
  din.set_content("s", dfa_rep("(b0 + b1)*", sigma));
  din.set_content("b0", dfa_rep("eps", sigma));
  din.set_content("b1", dfa_rep("eps", sigma));

  Transducer t({"q0", "q"}, sigma, "q0");
  std::string root = "s(hash0";
  for (std::size_t i = 1; i <= n; ++i) root += " $q hash" + std::to_string(i);
  t.add_rule("q0", "s", rhs(root + ")"));
  for (const Label& a : labels) t.add_rule("q", a, {RhsNode{a, false, {}}});

  // d_out(s): segment j simulates M_j; a flag remembers whether some earlier M_i rejected.
  // State layout: 0 = before hash0, then per segment (m, flag) with m = |M_j| as the dead state, then two ends.
  std::vector<StateId> base(n);
  StateId next_id = 1;
  for (std::size_t j = 0; j < n; ++j) {
    base[j] = next_id;
    next_id += StateId(2 * (ms[j].num_states() + 1));
  }
  const StateId end_reject = next_id, end_accept = next_id + 1;
  Dfa out(sigma, next_id + 2, 0);
  out.set_final(end_accept);
  auto seg = [&](std::size_t j, StateId m, bool f) {
    if (m == kNoState) m = StateId(ms[j].num_states());
    return base[j] + 2 * m + (f ? 1 : 0);
  };
  auto init = [&](std::size_t j) { return ms[j].num_states() ? ms[j].initial() : kNoState; };
  out.set_transition(0, sigma.id("hash0"), seg(0, init(0), false));
  for (std::size_t j = 0; j < n; ++j) {
    const Dfa& m = ms[j];
    const SymbolId hash = sigma.id("hash" + std::to_string(j + 1));
    for (StateId q = 0; q <= m.num_states(); ++q) {
      const StateId real = q == m.num_states() ? kNoState : q;
      for (bool f : {false, true}) {
        for (const char* b : {"b0", "b1"}) {
          StateId to = real == kNoState ? kNoState : m.next(real, m.alphabet().id(b));
          out.set_transition(seg(j, real, f), sigma.id(b), seg(j, to, f));
        }
        bool f2 = f || !m.is_final(real);
        StateId after = j + 1 == n ? (f2 ? end_accept : end_reject) : seg(j + 1, init(j + 1), f2);
        out.set_transition(seg(j, real, f), hash, after);
      }
    }
  }
  Dtd dout(sigma, "s");
  dout.set_content("s", LangRep::from_dfa(out));
  for (const Label& a : labels)
    if (a != "s") dout.set_content(a, dfa_rep("eps", sigma));

  EmptinessResult r = dfa_intersection_empty(ms);
  GeneratedInstance g{{din, dout, t}, r.empty, "dfa_intersection_empty", {}};
  g.provenance = "dfa-intersection of " + std::to_string(n) + " automata; intersection " +
                 (r.empty ? "empty" : "contains '" + join(r.witness, " ") + "'");
  return g;
}

GeneratedInstance gen_nfa_universality(const Nfa& n) {
  check_binary(n.alphabet(), "the automaton");
  Alphabet sigma({"s", "b0", "b1"});
  Dtd din(sigma, "s");
  din.set_content("s", dfa_rep("(b0 + b1)*", sigma));
  din.set_content("b0", dfa_rep("eps", sigma));
  din.set_content("b1", dfa_rep("eps", sigma));

  Nfa lifted(sigma, n.num_states());
  for (StateId q = 0; q < n.num_states(); ++q) {
    if (n.is_final(q)) lifted.set_final(q);
    for (SymbolId c = 0; c < 2; ++c)
      for (StateId p : n.successors(q, c)) lifted.add_transition(q, sigma.id(n.alphabet().symbol(c)), p);
  }
  for (StateId q : n.initial()) lifted.add_initial(q);
  Dtd dout(sigma, "s");
  dout.set_content("s", LangRep::from_nfa(lifted));
  dout.set_content("b0", dfa_rep("eps", sigma));
  dout.set_content("b1", dfa_rep("eps", sigma));

  UniversalityResult u = nfa_universal(n);
  GeneratedInstance g{{din, dout, identity_transducer(sigma, "q")}, u.universal, "nfa_universal", {}};
  g.provenance = std::string("nfa-universality; automaton is ") +
                 (u.universal ? "universal" : "not universal, misses '" + join(u.counterexample, " ") + "'");
  return g;
}

GeneratedInstance gen_nfa_emptiness_deg2(const Nfa& n) {
  check_binary(n.alphabet(), "the automaton");
  if (n.initial().size() > 2) throw DegreeViolation("more than two initial states");
  for (StateId q = 0; q < n.num_states(); ++q)
    for (SymbolId c = 0; c < 2; ++c)
      if (n.successors(q, c).size() > 2)
        throw DegreeViolation("state " + std::to_string(q) + " has more than two successors");

  Alphabet sigma({"r", "b0", "b1", "hash", "error", "accept"});
  Dtd din(sigma, "r");
  for (const char* a : {"r", "b0", "b1"}) din.set_content(a, dfa_rep("b0 + b1 + hash", sigma));
  din.set_content("hash", dfa_rep("eps", sigma));

  auto st = [](StateId q) { return "n" + std::to_string(q); };
  std::vector<Label> states{"q0"};
  for (StateId q = 0; q < n.num_states(); ++q) states.push_back(st(q));
  Transducer t(states, sigma, "q0");
  auto refs = [&](const std::vector<StateId>& qs) {
    std::string s;
    for (StateId q : qs) s += (s.empty() ? "$" : " $") + st(q);
    return s;
  };
  t.add_rule("q0", "r", rhs(n.initial().empty() ? "r(error)" : "r(" + refs(n.initial()) + ")"));
  for (StateId q = 0; q < n.num_states(); ++q) {
    for (SymbolId c = 0; c < 2; ++c) {
      const Label& a = n.alphabet().symbol(c);
      const auto& succ = n.successors(q, c);
      t.add_rule(st(q), a, rhs(succ.empty() ? "error" : a + "(" + refs(succ) + ")"));
    }
    t.add_rule(st(q), "hash", rhs(n.is_final(q) ? "accept" : "error"));
  }

  Dtd dout(sigma, "r");
  for (const char* a : {"r", "b0", "b1"})
    dout.set_content(a, dfa_rep("(b0 + b1 + error)(b0 + b1 + error)*", sigma));
  dout.set_content("error", dfa_rep("eps", sigma));

  EmptinessResult e = nfa_empty(n);
  GeneratedInstance g{{din, dout, t}, e.empty, "nfa_empty", {}};
  g.provenance = std::string("nfa-emptiness-deg2; language ") +
                 (e.empty ? "empty" : "contains '" + join(e.witness, " ") + "'");
  return g;
}

GeneratedInstance gen_tdbta_intersection(const std::vector<TdbtAutomaton>& as, TdbtaMode mode) {
  if (as.empty()) throw SemanticError("tdbta-intersection needs at least one automaton");
  const bool nd = mode == TdbtaMode::Nondeleting;
  std::vector<TdbtAutomaton> norm;
  for (std::size_t k = 0; k < as.size(); ++k) {
    const TdbtAutomaton& a = as[k];
    if (auto v = tdbta_validate(a); !v.empty()) throw SemanticError("automaton " + std::to_string(k + 1) + ": " + v[0]);
    TdbtAutomaton b(a.states(), kTdbtaInternal, kTdbtaLeaves, a.start());
    for (const auto& [key, r] : a.transitions()) {
      std::size_t want = key.second == "b0" ? 2 : key.second == "b1" ? 1 : 0;
      if (!b.is_internal_label(key.second) && !b.is_leaf_label(key.second))
        throw SemanticError("label '" + key.second + "' is not one of b0 b1 b0' b1'");
      if (r.size() != want)
        throw SemanticError("transition (" + key.first + ", " + key.second + ") breaks the ranked convention");
      b.set_transition(key.first, key.second, r);
    }
    norm.push_back(std::move(b));
  }
  const std::size_t n = norm.size();
  const std::size_t L = ceil_log2(n);

  std::vector<Label> base{"b0", "b1", "b0'", "b1'"};
  std::vector<Label> xl, xr;
  for (const Label& x : base) {
    xl.push_back(x + "_l");
    xr.push_back(x + "_r");
  }
  std::vector<Label> labels{"s", "hash", "error"};
  labels.insert(labels.end(), xl.begin(), xl.end());
  labels.insert(labels.end(), xr.begin(), xr.end());
  Alphabet sigma(labels);

  Dtd din(sigma, "s");
  const std::string any_l = "(" + join(xl, " + ") + ")", any_r = "(" + join(xr, " + ") + ")";
  din.set_content("s", dfa_rep("hash + " + any_l, sigma));
  din.set_content("hash", dfa_rep("hash + " + any_l, sigma));
  for (const char* side : {"_l", "_r"}) {
    din.set_content(std::string("b0") + side, dfa_rep(any_l + any_r, sigma));
    din.set_content(std::string("b1") + side, dfa_rep(any_l, sigma));
    din.set_content(std::string("b0'") + side, dfa_rep("eps", sigma));
    din.set_content(std::string("b1'") + side, dfa_rep("eps", sigma));
  }

  // copy states indexed by D(L): binary strings of length ≤ L
  std::vector<std::string> ids{""};
  for (std::size_t len = 1; len <= L; ++len)
    for (std::size_t v = 0; v < (std::size_t{1} << len); ++v) ids.push_back(bits_of(v, len));
  auto copy = [](const std::string& i) { return "copy_" + (i.empty() ? std::string("e") : i); };
  auto sim = [](std::size_t k, const Label& q, const char* side) { return "a" + std::to_string(k + 1) + "_" + q + side; };
  const std::size_t starts = std::size_t{1} << L;
  auto start = [](std::size_t k) { return "start" + std::to_string(k); };

  std::vector<Label> states;
  for (const auto& i : ids) states.push_back(copy(i));
  for (std::size_t k = 1; k <= starts; ++k) states.push_back(start(k));
  for (std::size_t k = 0; k < n; ++k)
    for (const Label& q : norm[k].states())
      for (const char* side : {"_l", "_r"}) states.push_back(sim(k, q, side));
  Transducer t(states, sigma, copy(""));

  auto wrap = [&](const std::string& label, const std::string& inner) {
    return nd ? label + "(" + inner + ")" : inner;
  };
  t.add_rule(copy(""), "s", rhs(L == 0 ? "s($" + start(1) + ")" : "s($copy_0 $copy_1)"));
  for (const auto& i : ids) {
    if (i.empty()) continue;
    if (i.size() < L) {
      t.add_rule(copy(i), "hash", rhs(wrap("hash", "$" + copy(i + "0") + " $" + copy(i + "1"))));
    } else {
      std::size_t k = std::stoul(i, nullptr, 2) + 1;
      t.add_rule(copy(i), "hash", rhs(wrap("hash", "$" + start(k))));
    }
    for (const Label& a : xl) t.add_rule(copy(i), a, rhs("error"));
    for (const Label& a : xr) t.add_rule(copy(i), a, rhs("error"));
  }

  // simulation rules of state q of automaton k read on the given side
  auto simulate = [&](const Label& state, std::size_t k, const Label& q, const char* side) {
    const char* other = std::string(side) == "_l" ? "_r" : "_l";
    for (const Label& x : base) {
      t.add_rule(state, x + other, {});
      const Label a = x + side;
      const std::vector<Label>* r = norm[k].transition(q, x);
      std::string body;
      if (!r) {
        body = "error";
      } else if (r->size() == 2) {
        body = wrap(a, "$" + sim(k, (*r)[0], "_l") + " $" + sim(k, (*r)[1], "_r"));
      } else if (r->size() == 1) {
        body = wrap(a, "$" + sim(k, (*r)[0], "_l"));
      } else {
        body = "eps";
      }
      t.add_rule(state, a, rhs(body));
    }
  };
  for (std::size_t k = 1; k <= starts; ++k) {
    t.add_rule(start(k), "hash", rhs("error"));
    if (k <= n) {
      simulate(start(k), k - 1, norm[k - 1].start(), "_l");
    } else {
      for (const Label& a : xl) t.add_rule(start(k), a, {});
      for (const Label& a : xr) t.add_rule(start(k), a, {});
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (const Label& q : norm[k].states())
      for (const char* side : {"_l", "_r"}) simulate(sim(k, q, side), k, q, side);

  OutputSchema out;
  if (!nd) {
    Dtd dout(sigma, "s");
    dout.set_content("s", dfa_rep("error error*", sigma));
    dout.set_content("error", dfa_rep("eps", sigma));
    out = dout;
  } else {
    // trees with at least one leaf labelled error
    Alphabet qs({"q_any", "q_err"});
    NtAutomaton b(qs, sigma);
    for (const Label& a : labels) {
      b.set_transition("q_any", a, LangRep::from_regex(parse_regex("q_any*"), qs));
      b.set_transition("q_err", a, LangRep::from_regex(parse_regex("q_any* q_err q_any*"), qs));
    }
    b.set_transition("q_err", "error", LangRep::from_regex(parse_regex("q_any* q_err q_any* + eps"), qs));
    b.set_final("q_err");
    out = b;
  }

  std::vector<NtAutomaton> ntas;
  for (const auto& a : norm) ntas.push_back(tdbta_to_nta(a));
  NtaEmptiness e = nta_intersection_empty(ntas);
  GeneratedInstance g{{din, out, t}, e.empty, "nta_intersection_empty", {}};
  g.provenance = std::string("tdbta-intersection (") + (nd ? "nondeleting" : "deleting") + ") of " +
                 std::to_string(n) + " automata, " + std::to_string(L) + " hash symbols; intersection " +
                 (e.empty ? "empty" : "contains " + to_string(e.witness));
  if (n <= 2) g.provenance += "; degenerate copy tree (n <= 2)";
  return g;
}

namespace {

std::vector<std::size_t> tile_indices(const TilingSystem& s, const std::vector<Label>& row) {
  std::vector<std::size_t> out;
  for (const Label& x : row) {
    auto it = std::find(s.tiles.begin(), s.tiles.end(), x);
    if (it == s.tiles.end()) throw SemanticError("row uses unknown tile '" + x + "'");
    out.push_back(std::size_t(it - s.tiles.begin()));
  }
  return out;
}

}  // namespace

std::optional<bool> tiling_solvable_oracle(const TilingSystem& s, std::size_t max_rows) {
  const std::size_t n = s.width(), k = s.tiles.size();
  if (s.bottom.size() != n || n == 0) throw SemanticError("top and bottom rows must have the same positive width");
  double total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= double(k);
  if (total > double(max_rows)) return std::nullopt;
  auto h_ok = [&](const std::vector<std::size_t>& r) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!s.horizontal.count({s.tiles[r[i]], s.tiles[r[i + 1]]})) return false;
    return true;
  };
  auto v_ok = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (std::size_t i = 0; i < n; ++i)
      if (!s.vertical.count({s.tiles[a[i]], s.tiles[b[i]]})) return false;
    return true;
  };
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::size_t> r(n, 0);
  while (true) {
    if (h_ok(r)) rows.push_back(r);
    std::size_t i = n;
    while (i > 0 && r[i - 1] + 1 == k) r[--i] = 0;
    if (i == 0) break;
    ++r[i - 1];
  }
  const auto bottom = tile_indices(s, s.bottom), top = tile_indices(s, s.top);
  if (!h_ok(bottom)) return false;
  std::set<std::vector<std::size_t>> seen{bottom};
  std::deque<std::vector<std::size_t>> queue{bottom};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (const auto& next : rows) {
      if (!v_ok(cur, next)) continue;
      if (next == top) return true;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

GeneratedInstance gen_tiling(const TilingSystem& s) {
  const std::size_t n = s.width(), k = s.tiles.size();
  if (n < 2) throw WidthTooSmall("tiling width must be at least 2");
  if (s.bottom.size() != n) throw SemanticError("top and bottom rows differ in width");
  const auto top = tile_indices(s, s.top), bottom = tile_indices(s, s.bottom);

  auto cell = [](std::size_t i, std::size_t j) { return "t" + std::to_string(i) + "_" + std::to_string(j); };
  std::vector<Label> labels{"r", "hash"};
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= k; ++j) labels.push_back(cell(i, j));
  labels.insert(labels.end(), kTilingOutputSymbols.begin(), kTilingOutputSymbols.end());
  Alphabet sigma(labels);

  auto row = [&](const std::vector<std::size_t>& r) {
    std::string w;
    for (std::size_t i = 0; i < n; ++i) w += cell(i + 1, r[i] + 1) + " ";
    return w;
  };
  std::string any_row;
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Label> column;
    for (std::size_t j = 1; j <= k; ++j) column.push_back(cell(i, j));
    any_row += "(" + join(column, " + ") + ") ";
  }
  Dtd din(sigma, "r");
  din.set_content("r", dfa_rep("hash " + row(bottom) + "hash (" + any_row + "hash)* " + row(top) + "hash", sigma));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= k; ++j) din.set_content(cell(i, j), dfa_rep("eps", sigma));
  din.set_content("hash", dfa_rep("eps", sigma));

  auto hstate = [](std::size_t i, std::size_t j) { return "h" + std::to_string(i) + "_" + std::to_string(j); };
  auto vstate = [](std::size_t i, std::size_t j) { return "v" + std::to_string(i) + "_" + std::to_string(j); };
  std::vector<Label> states{"q0"}, order;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j <= k; ++j) order.push_back(hstate(i, j));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= k; ++j) order.push_back(vstate(i, j));
  states.insert(states.end(), order.begin(), order.end());
  Transducer t(states, sigma, "q0");
  std::string root;
  for (const Label& q : order) root += (root.empty() ? "$" : " dollar $") + q;
  t.add_rule("q0", "r", rhs("r(" + root + ")"));

  auto H = [&](std::size_t a, std::size_t b) { return s.horizontal.count({s.tiles[a], s.tiles[b]}) > 0; };
  auto V = [&](std::size_t a, std::size_t b) { return s.vertical.count({s.tiles[a], s.tiles[b]}) > 0; };
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t th = 0; th < k; ++th) {
      if (i < n) {
        const Label q = hstate(i, th + 1);
        for (std::size_t j = 1; j <= n; ++j)
          for (std::size_t th2 = 0; th2 < k; ++th2) {
            Label alpha = "other";
            if (j == i) alpha = th == th2 ? "trigger" : "other";
            else if (j == i + 1) alpha = H(th, th2) ? "ok" : "error";
            t.add_rule(q, cell(j, th2 + 1), rhs(alpha));
          }
        t.add_rule(q, "hash", rhs("hor"));
      }
      const Label p = vstate(i, th + 1);
      for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t th2 = 0; th2 < k; ++th2) {
          Label alpha = "other";
          if (j == i && th == th2) alpha = V(th, th) ? "trigger1" : "trigger2";
          else if (j == i) alpha = V(th, th2) ? "ok" : "error";
          t.add_rule(p, cell(j, th2 + 1), rhs(alpha));
        }
      t.add_rule(p, "hash", rhs("ver"));
    }

  // Accepts exactly the outputs showing a violation. 0 idle, 1 after trigger, 2 in a trigger row,
  // 3 in the row after it, 4 violation found.
  Dfa out(sigma, 5, 0);
  auto idle = [&](const Label& x) -> StateId {
    if (x == "trigger") return 1;
    if (x == "trigger1" || x == "trigger2") return 2;
    return 0;
  };
  for (const Label& x : kTilingOutputSymbols) {
    SymbolId c = sigma.id(x);
    out.set_transition(0, c, idle(x));
    out.set_transition(1, c, x == "error" ? 4 : idle(x));
    out.set_transition(2, c, x == "ver" ? 3 : x == "dollar" ? 0 : 2);
    StateId v2 = 3;
    if (x == "trigger2" || x == "error") v2 = 4;
    else if (x == "trigger1") v2 = 2;
    else if (x == "ver" || x == "dollar") v2 = 0;
    out.set_transition(3, c, v2);
    out.set_transition(4, c, 4);
  }
  out.set_final(4);
  Dtd dout(sigma, "r");
  dout.set_content("r", LangRep::from_dfa(out));
  for (const Label& x : kTilingOutputSymbols) dout.set_content(x, dfa_rep("eps", sigma));

  auto solvable = tiling_solvable_oracle(s);
  if (!solvable) throw StateSpaceTooLarge("tiling oracle: too many rows");
  GeneratedInstance g{{din, dout, t}, !*solvable, "tiling_solvable_oracle", {}};
  g.provenance = "tiling of width " + std::to_string(n) + " with " + std::to_string(k) + " tiles; " +
                 (*solvable ? "solvable" : "not solvable");
  return g;
}

std::size_t code_length(const Alphabet& sigma) { return std::max<std::size_t>(1, ceil_log2(sigma.size())); }

std::string enc_symbol(const Alphabet& sigma, const Label& a) { return bits_of(sigma.id(a), code_length(sigma)); }

std::string enc_string(const Alphabet& sigma, const Word& w) {
  std::string s;
  for (const Label& a : w) s += enc_symbol(sigma, a);
  return s;
}

Word binary_word(const std::string& bits) {
  Word w;
  for (char c : bits) w.push_back(c == '0' ? "b0" : "b1");
  return w;
}

namespace {

Node enc_node(const Alphabet& sigma, const Node& n) {
  const std::string bits = enc_symbol(sigma, n.label);
  Node bottom{std::string("b") + bits.back(), {}};
  if (n.children.empty()) bottom.label += '\'';
  for (const Node& c : n.children) bottom.children.push_back(enc_node(sigma, c));
  for (std::size_t i = bits.size() - 1; i-- > 0;) bottom = Node{std::string("b") + bits[i], {std::move(bottom)}};
  return bottom;
}

}  // namespace

Tree enc_tree(const Alphabet& sigma, const Tree& t) {
  if (t.is_empty()) return t;
  return Tree(enc_node(sigma, t.root()));
}

Nfa encode_nfa(const Nfa& a) {
  const Alphabet& sigma = a.alphabet();
  const std::size_t k = code_length(sigma);
  Alphabet bin = binary_alphabet();
  Nfa out(bin, a.num_states());  // q_ε keeps the index of q
  std::map<std::pair<StateId, std::string>, StateId> mid;
  std::set<std::tuple<StateId, SymbolId, StateId>> added;
  auto add = [&](StateId from, char bit, StateId to) {
    SymbolId c = bin.id(bit == '0' ? "b0" : "b1");
    if (added.emplace(from, c, to).second) out.add_transition(from, c, to);
  };
  for (StateId q = 0; q < a.num_states(); ++q) {
    if (a.is_final(q)) out.set_final(q);
    for (SymbolId c = 0; c < sigma.size(); ++c) {
      const std::string bits = enc_symbol(sigma, sigma.symbol(c));
      for (StateId p : a.successors(q, c)) {
        StateId cur = q;
        for (std::size_t i = 0; i + 1 < k; ++i) {
          auto [it, fresh] = mid.emplace(std::make_pair(q, bits.substr(0, i + 1)), 0);
          if (fresh) it->second = out.add_state();
          add(cur, bits[i], it->second);
          cur = it->second;
        }
        add(cur, bits[k - 1], p);
      }
    }
  }
  for (StateId q : a.initial()) out.add_initial(q);
  return out;
}

Alphabet tdbta_alphabet(const TdbtAutomaton& b) {
  std::vector<Label> s = b.internal_labels();
  s.insert(s.end(), b.leaf_labels().begin(), b.leaf_labels().end());
  return Alphabet(s);
}

TdbtAutomaton encode_tdbta(const TdbtAutomaton& b) {
  const Alphabet sigma = tdbta_alphabet(b);
  const std::size_t k = code_length(sigma);
  auto name = [](const Label& q, const std::string& x) { return q + "_" + (x.empty() ? std::string("e") : x); };
  std::vector<Label> states;
  for (const Label& q : b.states()) states.push_back(name(q, ""));
  std::vector<std::tuple<Label, Label, std::vector<Label>>> trans;
  for (const auto& [key, rhs] : b.transitions()) {
    const auto& [q, a] = key;
    const std::string bits = enc_symbol(sigma, a);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      Label to = name(q, bits.substr(0, i + 1));
      if (std::find(states.begin(), states.end(), to) == states.end()) states.push_back(to);
      trans.emplace_back(name(q, bits.substr(0, i)), std::string("b") + bits[i], std::vector<Label>{to});
    }
    std::vector<Label> last;
    for (const Label& p : rhs) last.push_back(name(p, ""));
    Label lab = std::string("b") + bits.back() + (b.is_leaf_label(a) ? "'" : "");
    trans.emplace_back(name(q, bits.substr(0, k - 1)), lab, last);
  }
  TdbtAutomaton out(states, kTdbtaInternal, kTdbtaLeaves, name(b.start(), ""));
  for (auto& [q, a, r] : trans) out.set_transition(q, a, r);
  return out;
}

Profile dfa_profile() { return Profile{}; }

Profile sl_profile() {
  Profile p;
  p.kind = LangRep::Kind::Sl;
  return p;
}

namespace {

class RandomGen {
 public:
  RandomGen(std::uint64_t seed, const Profile& p) : rng_(seed), p_(p) {
    std::vector<Label> labels;
    for (std::size_t i = 0; i < p.alphabet; ++i) labels.push_back("a" + std::to_string(i));
    sigma_ = Alphabet(labels);
  }

  Instance make() {
    Dtd din = dtd();
    for (int tries = 0; tries < 20 && dtd_empty(din).empty; ++tries) din = dtd();
    Dtd dout = dtd();
    std::vector<Label> qs;
    for (std::size_t i = 0; i < p_.states; ++i) qs.push_back("q" + std::to_string(i));
    Transducer t(qs, sigma_, "q0");
    for (const Label& q : qs)
      for (const Label& a : sigma_.symbols()) {
        if (!chance(0.85)) continue;
        std::size_t budget = 1 + pick(p_.rhs_nodes);
        Rhs r;
        if (q == "q0") {
          RhsNode root{chance(0.8) ? dout.start() : label(), false, {}};
          --budget;
          root.children = hedge(budget, 2, qs);
          r.push_back(std::move(root));
        } else if (!chance(0.1)) {
          r = p_.nondeleting ? trees(budget, qs) : hedge(budget, 1, qs);
        }
        t.add_rule(q, a, std::move(r));
      }
    return {din, dout, t};
  }

 private:
  bool chance(double x) { return std::uniform_real_distribution<double>(0, 1)(rng_) < x; }
  std::size_t pick(std::size_t n) { return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  Label label() { return sigma_.symbol(SymbolId(pick(sigma_.size()))); }

  Dfa dfa() {
    const std::size_t n = 1 + pick(p_.content_states);
    Dfa d(sigma_, n, 0);
    for (StateId q = 0; q < n; ++q) {
      if (chance(q == 0 ? 0.5 : 0.4)) d.set_final(q);
      for (SymbolId c = 0; c < sigma_.size(); ++c)
        if (chance(0.5)) d.set_transition(q, c, StateId(pick(n)));
    }
    return d;
  }

  Nfa nfa() {
    const std::size_t n = 1 + pick(p_.content_states);
    Nfa a(sigma_, n);
    a.add_initial(0);
    for (StateId q = 0; q < n; ++q) {
      if (chance(q == 0 ? 0.5 : 0.4)) a.set_final(q);
      for (SymbolId c = 0; c < sigma_.size(); ++c)
        for (StateId p = 0; p < n; ++p)
          if (chance(0.25)) a.add_transition(q, c, p);
    }
    return a;
  }

  Regex regex(int depth) {
    if (depth == 0 || chance(0.3)) return chance(0.15) ? Regex::epsilon() : Regex::symbol(label());
    switch (pick(3)) {
      case 0: return Regex::concat({regex(depth - 1), regex(depth - 1)});
      case 1: return Regex::alt({regex(depth - 1), regex(depth - 1)});
      default: return Regex::star(regex(depth - 1));
    }
  }

  SlFormula sl(int depth) {
    if (depth == 0 || chance(0.35)) {
      std::uint64_t i = pick(3);
      return chance(0.5) ? SlFormula::eq(label(), i) : SlFormula::ge(label(), i);
    }
    switch (pick(3)) {
      case 0: return SlFormula::conj({sl(depth - 1), sl(depth - 1)});
      case 1: return SlFormula::disj({sl(depth - 1), sl(depth - 1)});
      default: return SlFormula::negate(sl(depth - 1));
    }
  }

  LangRep content() {
    switch (p_.kind) {
      case LangRep::Kind::Dfa: return LangRep::from_dfa(dfa());
      case LangRep::Kind::Nfa: return LangRep::from_nfa(nfa());
      case LangRep::Kind::Regex: return LangRep::from_regex(regex(3), sigma_);
      case LangRep::Kind::Sl: return LangRep::from_sl(sl(2), sigma_);
    }
    return LangRep::empty_language(sigma_);
  }

  Dtd dtd() {
    Dtd d(sigma_, label());
    for (const Label& a : sigma_.symbols()) d.set_content(a, content());
    return d;
  }

  // Up to `max_items` siblings; states take at most copy_width slots.
  Rhs hedge(std::size_t& budget, std::size_t max_items, const std::vector<Label>& qs) {
    Rhs h;
    std::size_t refs = 0;
    const std::size_t items = pick(max_items + 1);
    for (std::size_t i = 0; i < items; ++i) {
      if (refs < p_.copy_width && chance(0.5)) {
        h.push_back(state_ref(qs[pick(qs.size())]));
        ++refs;
      } else if (budget > 0) {
        --budget;
        RhsNode n{label(), false, {}};
        n.children = hedge(budget, 2, qs);
        h.push_back(std::move(n));
      }
    }
    return h;
  }

  Rhs trees(std::size_t& budget, const std::vector<Label>& qs) {
    Rhs h;
    const std::size_t items = 1 + pick(2);
    for (std::size_t i = 0; i < items && budget > 0; ++i) {
      --budget;
      RhsNode n{label(), false, {}};
      n.children = hedge(budget, 2, qs);
      h.push_back(std::move(n));
    }
    return h;
  }

  std::mt19937_64 rng_;
  Profile p_;
  Alphabet sigma_;
};

}  // namespace

Instance gen_random_instance(std::uint64_t seed, const Profile& p) { return RandomGen(seed, p).make(); }

}  // namespace xtc

#include <algorithm>
#include <deque>
#include <map>

#include "scan.hpp"
#include "xtc/error.hpp"
#include "xtc/strlang.hpp"

namespace xtc {

Alphabet::Alphabet(std::vector<Label> symbols) : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], static_cast<SymbolId>(i)).second)
      throw SemanticError("duplicate alphabet symbol '" + symbols_[i] + "'");
  }
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId Alphabet::id(std::string_view name) const {
  auto f = find(name);
  if (!f) throw UnknownSymbol("unknown symbol '" + std::string(name) + "'");
  return *f;
}

SymbolWord to_symbols(const Alphabet& sigma, const Word& w) {
  SymbolWord out;
  out.reserve(w.size());
  for (const Label& a : w) out.push_back(sigma.id(a));
  return out;
}

Word to_word(const Alphabet& sigma, const SymbolWord& w) {
  Word out;
  out.reserve(w.size());
  for (SymbolId a : w) out.push_back(sigma.symbol(a));
  return out;
}

// ---- Nfa

Nfa::Nfa(Alphabet alphabet, std::size_t num_states) : alphabet_(std::move(alphabet)) {
  for (std::size_t i = 0; i < num_states; ++i) add_state();
}

StateId Nfa::add_state() {
  delta_.emplace_back(alphabet_.size());
  final_.push_back(false);
  return static_cast<StateId>(final_.size() - 1);
}

void Nfa::add_transition(StateId from, SymbolId a, StateId to) {
  if (from >= num_states() || to >= num_states() || a >= alphabet_.size())
    throw SemanticError("transition out of range");
  auto& v = delta_[from][a];
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it == v.end() || *it != to) v.insert(it, to);
}

void Nfa::add_initial(StateId q) {
  if (q >= num_states()) throw SemanticError("initial state out of range");
  auto it = std::lower_bound(initial_.begin(), initial_.end(), q);
  if (it == initial_.end() || *it != q) initial_.insert(it, q);
}

void Nfa::set_final(StateId q, bool f) { final_.at(q) = f; }

bool Nfa::is_deterministic() const {
  if (initial_.size() != 1) return false;
  for (const auto& row : delta_)
    for (const auto& v : row)
      if (v.size() > 1) return false;
  return true;
}

// ---- Dfa

Dfa::Dfa(Alphabet alphabet, std::size_t num_states, StateId initial)
    : alphabet_(std::move(alphabet)), initial_(initial) {
  for (std::size_t i = 0; i < num_states; ++i) add_state();
}

StateId Dfa::add_state() {
  table_.resize(table_.size() + alphabet_.size(), kNoState);
  final_.push_back(false);
  return static_cast<StateId>(final_.size() - 1);
}

void Dfa::set_transition(StateId from, SymbolId a, StateId to) {
  if (from >= num_states() || (to != kNoState && to >= num_states()) || a >= alphabet_.size())
    throw SemanticError("transition out of range");
  table_[std::size_t(from) * alphabet_.size() + a] = to;
}

void Dfa::set_final(StateId q, bool f) { final_.at(q) = f; }

StateId Dfa::run(StateId from, std::span<const SymbolId> w) const {
  StateId q = from;
  for (SymbolId a : w) {
    if (q == kNoState) break;
    q = next(q, a);
  }
  return q;
}

bool Dfa::is_complete() const {
  return std::find(table_.begin(), table_.end(), kNoState) == table_.end();
}

Dfa Dfa::completed() const {
  if (is_complete() && num_states() > 0) return *this;
  Dfa d = *this;
  if (d.num_states() == 0) {
    d.add_state();
    d.initial_ = 0;
  }
  StateId sink = d.add_state();
  for (auto& t : d.table_)
    if (t == kNoState) t = sink;
  return d;
}

Dfa Dfa::complemented() const {
  Dfa d = completed();
  for (std::size_t q = 0; q < d.final_.size(); ++q) d.final_[q] = !d.final_[q];
  return d;
}

Nfa Dfa::to_nfa() const {
  Nfa n(alphabet_, num_states());
  if (num_states() == 0) return n;
  n.add_initial(initial_);
  for (StateId q = 0; q < num_states(); ++q) {
    n.set_final(q, final_[q]);
    for (SymbolId a = 0; a < alphabet_.size(); ++a)
      if (StateId p = next(q, a); p != kNoState) n.add_transition(q, a, p);
  }
  return n;
}

Dfa nfa_as_dfa(const Nfa& a) {
  if (a.initial().size() > 1) throw SemanticError("dfa has more than one initial state");
  for (StateId q = 0; q < a.num_states(); ++q)
    for (SymbolId c = 0; c < a.alphabet().size(); ++c)
      if (a.successors(q, c).size() > 1) throw SemanticError("dfa transition is not deterministic");
  if (a.initial().empty()) return Dfa(a.alphabet(), 0);
  Dfa d(a.alphabet(), a.num_states(), a.initial()[0]);
  for (StateId q = 0; q < a.num_states(); ++q) {
    d.set_final(q, a.is_final(q));
    for (SymbolId c = 0; c < a.alphabet().size(); ++c)
      if (!a.successors(q, c).empty()) d.set_transition(q, c, a.successors(q, c)[0]);
  }
  return d;
}

// ---- algorithms

bool nfa_accepts(const Nfa& a, std::span<const SymbolId> w) {
  std::vector<char> cur(a.num_states(), 0), nxt(a.num_states(), 0);
  for (StateId q : a.initial()) cur[q] = 1;
  for (SymbolId c : w) {
    std::fill(nxt.begin(), nxt.end(), 0);
    bool any = false;
    for (StateId q = 0; q < a.num_states(); ++q) {
      if (!cur[q]) continue;
      for (StateId p : a.successors(q, c)) nxt[p] = 1, any = true;
    }
    if (!any) return false;
    cur.swap(nxt);
  }
  for (StateId q = 0; q < a.num_states(); ++q)
    if (cur[q] && a.is_final(q)) return true;
  return false;
}

bool nfa_membership(const Nfa& a, const Word& w) { return nfa_accepts(a, to_symbols(a.alphabet(), w)); }

namespace {

// BFS over (state, flag) where flag records whether symbol c has been read (flag fixed to 1 if c absent).
std::optional<SymbolWord> bfs_word(const Nfa& a, const SymbolMask* allowed, std::optional<SymbolId> c) {
  const std::size_t n = a.num_states();
  const int flags = c ? 2 : 1;
  auto key = [&](StateId q, int f) { return std::size_t(q) * flags + f; };
  std::vector<std::size_t> parent(n * flags, SIZE_MAX);
  std::vector<SymbolId> via(n * flags, 0);
  std::vector<char> seen(n * flags, 0);
  std::deque<std::size_t> queue;
  const int target = c ? 1 : 0;
  for (StateId q : a.initial()) {
    std::size_t k = key(q, 0);
    if (!seen[k]) seen[k] = 1, queue.push_back(k);
  }
  while (!queue.empty()) {
    std::size_t k = queue.front();
    queue.pop_front();
    StateId q = static_cast<StateId>(k / flags);
    int f = static_cast<int>(k % flags);
    if (f == target && a.is_final(q)) {
      SymbolWord w;
      for (std::size_t cur = k; parent[cur] != SIZE_MAX; cur = parent[cur]) w.push_back(via[cur]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (SymbolId s = 0; s < a.alphabet().size(); ++s) {
      if (allowed && !(*allowed)[s]) continue;
      int nf = (c && s == *c) ? 1 : f;
      for (StateId p : a.successors(q, s)) {
        std::size_t nk = key(p, nf);
        if (seen[nk]) continue;
        seen[nk] = 1;
        parent[nk] = k;
        via[nk] = s;
        queue.push_back(nk);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<SymbolWord> shortest_word(const Nfa& a, const SymbolMask* allowed) {
  return bfs_word(a, allowed, std::nullopt);
}

std::optional<SymbolWord> shortest_word_containing(const Nfa& a, SymbolId c, const SymbolMask* allowed) {
  if (allowed && !(*allowed)[c]) return std::nullopt;
  return bfs_word(a, allowed, c);
}

EmptinessResult nfa_empty(const Nfa& a) {
  auto w = shortest_word(a);
  if (!w) return {true, {}};
  return {false, to_word(a.alphabet(), *w)};
}

Dfa determinize(const Nfa& a, std::size_t cap) {
  const std::size_t k = a.alphabet().size();
  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> sets;
  Dfa d(a.alphabet(), 0);
  auto intern = [&](std::vector<StateId> s) {
    auto [it, fresh] = ids.emplace(s, static_cast<StateId>(sets.size()));
    if (fresh) {
      if (sets.size() >= cap)
        throw StateCapExceeded("determinization exceeded " + std::to_string(cap) + " states");
      sets.push_back(std::move(s));
      StateId q = d.add_state();
      bool fin = false;
      for (StateId p : sets.back()) fin = fin || a.is_final(p);
      d.set_final(q, fin);
    }
    return it->second;
  };
  intern(a.initial());
  std::vector<char> mark(a.num_states(), 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (SymbolId c = 0; c < k; ++c) {
      std::vector<StateId> next;
      for (StateId p : sets[i])
        for (StateId r : a.successors(p, c))
          if (!mark[r]) mark[r] = 1, next.push_back(r);
      for (StateId r : next) mark[r] = 0;
      if (next.empty()) continue;
      std::sort(next.begin(), next.end());
      StateId t = intern(std::move(next));
      d.set_transition(static_cast<StateId>(i), c, t);
    }
  }
  return d;
}

UniversalityResult nfa_universal(const Nfa& a, std::size_t cap) {
  Dfa comp = determinize(a, cap).complemented();
  auto w = shortest_word(comp.to_nfa());
  if (!w) return {true, {}};
  return {false, to_word(a.alphabet(), *w)};
}

EmptinessResult dfa_intersection_empty(std::span<const Dfa> dfas) {
  if (dfas.empty()) throw SemanticError("intersection of zero automata");
  const Alphabet& sigma = dfas[0].alphabet();
  for (const Dfa& d : dfas)
    if (!(d.alphabet() == sigma)) throw SemanticError("intersection over differing alphabets");
  using Tuple = std::vector<StateId>;
  std::map<Tuple, std::size_t> ids;
  std::vector<Tuple> nodes;
  std::vector<std::size_t> parent;
  std::vector<SymbolId> via;
  Tuple init;
  for (const Dfa& d : dfas) {
    if (d.num_states() == 0) return {true, {}};
    init.push_back(d.initial());
  }
  ids[init] = 0;
  nodes.push_back(init);
  parent.push_back(SIZE_MAX);
  via.push_back(0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool all_final = true;
    for (std::size_t j = 0; j < dfas.size(); ++j) all_final = all_final && dfas[j].is_final(nodes[i][j]);
    if (all_final) {
      SymbolWord w;
      for (std::size_t cur = i; parent[cur] != SIZE_MAX; cur = parent[cur]) w.push_back(via[cur]);
      std::reverse(w.begin(), w.end());
      return {false, to_word(sigma, w)};
    }
    for (SymbolId c = 0; c < sigma.size(); ++c) {
      Tuple nxt;
      nxt.reserve(dfas.size());
      bool dead = false;
      for (std::size_t j = 0; j < dfas.size() && !dead; ++j) {
        StateId p = dfas[j].next(nodes[i][j], c);
        if (p == kNoState) dead = true;
        nxt.push_back(p);
      }
      if (dead) continue;
      if (ids.emplace(nxt, nodes.size()).second) {
        nodes.push_back(std::move(nxt));
        parent.push_back(i);
        via.push_back(c);
      }
    }
  }
  return {true, {}};
}

std::optional<long> max_word_length(const Nfa& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet().size();
  // trim: reachable and co-reachable states
  std::vector<char> reach(n, 0), coreach(n, 0);
  std::vector<StateId> stack(a.initial().begin(), a.initial().end());
  for (StateId q : stack) reach[q] = 1;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (SymbolId c = 0; c < k; ++c)
      for (StateId p : a.successors(q, c))
        if (!reach[p]) reach[p] = 1, stack.push_back(p);
  }
  std::vector<std::vector<StateId>> rev(n);
  for (StateId q = 0; q < n; ++q)
    for (SymbolId c = 0; c < k; ++c)
      for (StateId p : a.successors(q, c)) rev[p].push_back(q);
  for (StateId q = 0; q < n; ++q)
    if (a.is_final(q)) coreach[q] = 1, stack.push_back(q);
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (StateId p : rev[q])
      if (!coreach[p]) coreach[p] = 1, stack.push_back(p);
  }
  std::vector<char> live(n);
  bool any = false;
  for (StateId q = 0; q < n; ++q) {
    live[q] = reach[q] && coreach[q];
    any = any || live[q];
  }
  if (!any) return -1;
  // longest path in the live subgraph, or nullopt on a cycle
  std::vector<int> color(n, 0);
  std::vector<long> longest(n, -1);  // longest path from q to a final state
  bool cyclic = false;
  auto dfs = [&](auto&& self, StateId q) -> void {
    color[q] = 1;
    long best = a.is_final(q) ? 0 : -1;
    for (SymbolId c = 0; c < k && !cyclic; ++c)
      for (StateId p : a.successors(q, c)) {
        if (!live[p]) continue;
        if (color[p] == 1) {
          cyclic = true;
          return;
        }
        if (color[p] == 0) self(self, p);
        if (cyclic) return;
        if (longest[p] >= 0) best = std::max(best, longest[p] + 1);
      }
    longest[q] = best;
    color[q] = 2;
  };
  long result = -1;
  for (StateId q : a.initial()) {
    if (!live[q]) continue;
    if (color[q] == 0) dfs(dfs, q);
    if (cyclic) return std::nullopt;
    result = std::max(result, longest[q]);
  }
  return result;
}

Nfa parse_automaton(std::string_view text, const Alphabet& sigma) {
  detail::Scanner sc(text);
  sc.expect('{');
  std::size_t states = 0;
  std::optional<std::size_t> declared;
  std::vector<StateId> init, fin;
  std::vector<std::tuple<StateId, SymbolId, StateId>> trans;
  auto note = [&](unsigned long long q) {
    if (q >= (1ull << 31)) sc.fail("state index too large");
    states = std::max<std::size_t>(states, q + 1);
    return static_cast<StateId>(q);
  };
  while (!sc.accept('}')) {
    if (sc.at_end()) sc.fail("unterminated automaton literal");
    if (sc.accept(';')) continue;
    if (sc.at_ident()) {
      std::string kw = sc.ident();
      if (kw == "states") {
        declared = sc.natural();
        states = std::max<std::size_t>(states, *declared);
      } else if (kw == "init" || kw == "final") {
        auto& dst = kw == "init" ? init : fin;
        while (sc.at_digit()) dst.push_back(note(sc.natural()));
      } else {
        sc.fail("unknown automaton clause '" + kw + "'");
      }
      continue;
    }
    StateId from = note(sc.natural());
    std::string sym = sc.ident();
    auto id = sigma.find(sym);
    if (!id) throw UnknownSymbol("unknown symbol '" + sym + "' in automaton");
    StateId to = note(sc.natural());
    trans.emplace_back(from, *id, to);
  }
  if (!sc.at_end()) sc.fail("trailing input after automaton literal");
  if (declared && states > *declared)
    throw SemanticError("state " + std::to_string(states - 1) + " used but only " + std::to_string(*declared) +
                        " declared");
  Nfa a(sigma, states);
  for (StateId q : init) a.add_initial(q);
  for (StateId q : fin) a.set_final(q);
  for (auto [f, c, t] : trans) a.add_transition(f, c, t);
  return a;
}

std::string automaton_literal(const Nfa& a) {
  std::string s = "{states " + std::to_string(a.num_states()) + "; init";
  for (StateId q : a.initial()) s += " " + std::to_string(q);
  s += "; final";
  for (StateId q = 0; q < a.num_states(); ++q)
    if (a.is_final(q)) s += " " + std::to_string(q);
  for (StateId q = 0; q < a.num_states(); ++q)
    for (SymbolId c = 0; c < a.alphabet().size(); ++c)
      for (StateId p : a.successors(q, c))
        s += "; " + std::to_string(q) + " " + a.alphabet().symbol(c) + " " + std::to_string(p);
  return s + "}";
}

}  // namespace xtc

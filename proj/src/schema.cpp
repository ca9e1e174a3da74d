#include "xtc/schema.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "xtc/error.hpp"

namespace xtc {

namespace {

Nfa as_nfa(const LangRep& m) { return m.is_sl() ? m.to_dfa().to_nfa() : m.nfa(); }

std::vector<StateId> step(const Nfa& a, const std::vector<StateId>& cur, SymbolId c) {
  std::vector<StateId> next;
  for (StateId q : cur)
    for (StateId p : a.successors(q, c)) next.push_back(p);
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

bool any_final(const Nfa& a, const std::vector<StateId>& cur) {
  return std::any_of(cur.begin(), cur.end(), [&](StateId q) { return a.is_final(q); });
}

std::string word_text(const Word& w) {
  std::string s;
  for (const Label& l : w) s += (s.empty() ? "" : " ") + l;
  return s;
}

void check_labels(const Alphabet& sigma, const Node& n) {
  if (!sigma.contains(n.label)) throw UnknownSymbol("unknown label '" + n.label + "'");
  for (const Node& c : n.children) check_labels(sigma, c);
}

// clause (ii) on every node of n; first violation in document order
bool check_node(const Dtd& d, const Node& n, NodeAddress& at, Check& out) {
  auto id = d.alphabet().find(n.label);
  if (!id) {
    out = {false, at, "unknown label '" + n.label + "'"};
    return false;
  }
  Word w = top(n.children);
  for (const Label& l : w)
    if (!d.alphabet().contains(l)) {
      out = {false, at, "children string '" + word_text(w) + "' uses unknown labels"};
      return false;
    }
  if (!d.content(*id).accepts(w)) {
    out = {false, at, "children string '" + word_text(w) + "' not in d(" + n.label + ")"};
    return false;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    at.push_back(i + 1);
    if (!check_node(d, n.children[i], at, out)) return false;
    at.pop_back();
  }
  return true;
}

SymbolMask reachable_from(const Dtd& d, SymbolId s, const SymbolMask& allowed) {
  SymbolMask seen(d.size(), false);
  std::vector<SymbolId> stack{s};
  seen[s] = true;
  while (!stack.empty()) {
    SymbolId a = stack.back();
    stack.pop_back();
    for (SymbolId c = 0; c < d.size(); ++c)
      if (!seen[c] && allowed[c] && d.content(a).witness_containing(c, &allowed)) {
        seen[c] = true;
        stack.push_back(c);
      }
  }
  return seen;
}

}  // namespace

// ---- Dtd

Dtd::Dtd(Alphabet sigma, const Label& start) : alphabet_(std::make_shared<const Alphabet>(std::move(sigma))) {
  for (std::size_t i = 0; i < alphabet_->size(); ++i) content_.push_back(LangRep::empty_language(*alphabet_));
  start_ = alphabet_->id(start);
}

void Dtd::set_content(const Label& a, LangRep m) {
  SymbolId id = alphabet_->id(a);
  if (!(m.alphabet() == *alphabet_)) throw SemanticError("content model for '" + a + "' uses a different alphabet");
  content_[id] = std::move(m);
}

void Dtd::set_start(const Label& a) { start_ = alphabet_->id(a); }

bool Dtd::all_kind(LangRep::Kind k) const {
  return std::all_of(content_.begin(), content_.end(), [&](const LangRep& m) { return m.kind() == k; });
}

bool Dtd::any_sl() const {
  return std::any_of(content_.begin(), content_.end(), [](const LangRep& m) { return m.is_sl(); });
}

Check dtd_validate(const Dtd& d, const Tree& t) {
  if (t.is_empty()) return {false, {}, "empty tree"};
  check_labels(d.alphabet(), t.root());
  if (t.root().label != d.start()) return {false, {}, "root label '" + t.root().label + "' is not " + d.start()};
  Check out;
  NodeAddress at;
  check_node(d, t.root(), at, out);
  return out;
}

Check dtd_partly_satisfies(const Dtd& d, const Hedge& h) {
  Check out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    NodeAddress at{i + 1};
    if (!check_node(d, h[i], at, out)) return out;
  }
  return out;
}

// ---- productivity, emptiness, reduction

Productivity productive_symbols(const Dtd& d) {
  Productivity p;
  p.productive.assign(d.size(), false);
  p.layer.assign(d.size(), -1);
  p.word.assign(d.size(), {});
  for (int layer = 0;; ++layer) {
    SymbolMask before = p.productive;
    bool grew = false;
    for (SymbolId a = 0; a < d.size(); ++a) {
      if (before[a]) continue;
      if (auto w = d.content(a).witness(&before)) {
        p.productive[a] = true;
        p.layer[a] = layer;
        p.word[a] = std::move(*w);
        grew = true;
      }
    }
    if (!grew) break;
  }
  return p;
}

std::optional<Node> symbol_witness(const Dtd& d, const Productivity& p, SymbolId a) {
  if (!p.productive.at(a)) return std::nullopt;
  Node n{d.alphabet().symbol(a), {}};
  for (SymbolId c : p.word[a]) n.children.push_back(*symbol_witness(d, p, c));
  return n;
}

DtdEmptiness dtd_empty(const Dtd& d) {
  Productivity p = productive_symbols(d);
  if (!p.productive[d.start_id()]) return {};
  return {false, Tree(*symbol_witness(d, p, d.start_id()))};
}

Dtd dtd_reduce(const Dtd& d) {
  Productivity p = productive_symbols(d);
  if (!p.productive[d.start_id()]) throw EmptyLanguage("start symbol '" + d.start() + "' derives no finite tree");
  Dtd restricted(d.alphabet(), d.start());
  for (SymbolId a = 0; a < d.size(); ++a)
    if (p.productive[a]) restricted.set_content(d.alphabet().symbol(a), d.content(a).restrict_to(p.productive));
  SymbolMask live = reachable_from(restricted, d.start_id(), p.productive);
  Dtd out(d.alphabet(), d.start());
  for (SymbolId a = 0; a < d.size(); ++a)
    if (live[a]) out.set_content(d.alphabet().symbol(a), d.content(a).restrict_to(live));
  return out;
}

SymbolMask live_symbols(const Dtd& reduced) {
  Productivity p = productive_symbols(reduced);
  if (!p.productive[reduced.start_id()]) return SymbolMask(reduced.size(), false);
  return reachable_from(reduced, reduced.start_id(), p.productive);
}

// ---- NTA

NtAutomaton::NtAutomaton(Alphabet states, Alphabet sigma)
    : states_(std::make_shared<const Alphabet>(std::move(states))),
      sigma_(std::make_shared<const Alphabet>(std::move(sigma))),
      final_(states_->size(), false) {}

void NtAutomaton::set_transition(const Label& q, const Label& a, LangRep m) {
  if (!(m.alphabet() == *states_)) throw SemanticError("transition language must range over the states");
  delta_.insert_or_assign({states_->id(q), sigma_->id(a)}, std::move(m));
}

void NtAutomaton::set_final(const Label& q, bool f) { final_[states_->id(q)] = f; }

const LangRep* NtAutomaton::transition(StateId q, SymbolId a) const {
  auto it = delta_.find({q, a});
  return it == delta_.end() ? nullptr : &it->second;
}

namespace {

struct SetTree {
  std::vector<StateId> states;
  std::vector<SetTree> children;
};

// Reachable NFA state sets while reading one state from each child set.
std::vector<std::vector<StateId>> layered(const Nfa& a, const std::vector<SetTree>& kids) {
  std::vector<std::vector<StateId>> layers;
  std::vector<StateId> cur(a.initial().begin(), a.initial().end());
  std::sort(cur.begin(), cur.end());
  layers.push_back(cur);
  for (const SetTree& k : kids) {
    std::vector<StateId> next;
    for (StateId s : k.states) {
      auto part = step(a, cur, s);
      next.insert(next.end(), part.begin(), part.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
    layers.push_back(cur);
  }
  return layers;
}

SetTree state_sets(const NtAutomaton& b, const Node& n) {
  SetTree t;
  for (const Node& c : n.children) t.children.push_back(state_sets(b, c));
  SymbolId a = b.alphabet().id(n.label);
  for (StateId q = 0; q < b.states().size(); ++q) {
    const LangRep* m = b.transition(q, a);
    if (!m) continue;
    Nfa nfa = as_nfa(*m);
    if (any_final(nfa, layered(nfa, t.children).back())) t.states.push_back(q);
  }
  return t;
}

StateNode pick_run(const NtAutomaton& b, const Node& n, const SetTree& sets, StateId q) {
  StateNode out{b.states().symbol(q), {}};
  Nfa nfa = as_nfa(*b.transition(q, b.alphabet().id(n.label)));
  auto layers = layered(nfa, sets.children);
  // walk back from a final NFA state choosing one child state per position
  std::vector<StateId> choice(n.children.size());
  StateId target = kNoState;
  for (StateId p : layers.back())
    if (nfa.is_final(p)) {
      target = p;
      break;
    }
  for (std::size_t i = n.children.size(); i-- > 0;) {
    bool found = false;
    for (StateId p : layers[i]) {
      for (StateId s : sets.children[i].states) {
        const auto& succ = nfa.successors(p, s);
        if (std::find(succ.begin(), succ.end(), target) != succ.end()) {
          choice[i] = s;
          target = p;
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  for (std::size_t i = 0; i < n.children.size(); ++i)
    out.children.push_back(pick_run(b, n.children[i], sets.children[i], choice[i]));
  return out;
}

bool run_ok(const NtAutomaton& b, const Node& t, const StateNode& r) {
  if (r.children.size() != t.children.size()) return false;
  auto q = b.states().find(r.state);
  auto a = b.alphabet().find(t.label);
  if (!q || !a) return false;
  const LangRep* m = b.transition(*q, *a);
  if (!m) return false;
  Word w;
  for (const StateNode& c : r.children) w.push_back(c.state);
  if (!m->accepts(w)) return false;
  for (std::size_t i = 0; i < t.children.size(); ++i)
    if (!run_ok(b, t.children[i], r.children[i])) return false;
  return true;
}

}  // namespace

NtaRun nta_membership(const NtAutomaton& b, const Tree& t) {
  if (t.is_empty()) return {};
  check_labels(b.alphabet(), t.root());
  SetTree sets = state_sets(b, t.root());
  for (StateId q : sets.states)
    if (b.is_final(q)) return {true, pick_run(b, t.root(), sets, q)};
  return {};
}

std::vector<StateId> nta_states_at(const NtAutomaton& b, const Node& n) {
  check_labels(b.alphabet(), n);
  return state_sets(b, n).states;
}

bool nta_run_valid(const NtAutomaton& b, const Node& t, const StateNode& run) {
  auto q = b.states().find(run.state);
  return q && b.is_final(*q) && run_ok(b, t, run);
}

NtaEmptiness nta_intersection_empty(const std::vector<NtAutomaton>& bs) {
  if (bs.empty()) throw SemanticError("intersection of no automata");
  const Alphabet& sigma = bs[0].alphabet();
  for (const auto& b : bs)
    if (!(b.alphabet() == sigma)) throw SemanticError("automata use different alphabets");
  const std::size_t n = bs.size();
  double space = 1;
  for (const auto& b : bs) space *= double(b.states().size());
  if (space > 200000) throw StateSpaceTooLarge("product of state sets too large");

  std::vector<std::map<SymbolId, std::map<StateId, Nfa>>> nfas(n);
  for (std::size_t i = 0; i < n; ++i)
    for (SymbolId a = 0; a < sigma.size(); ++a)
      for (StateId q = 0; q < bs[i].states().size(); ++q)
        if (const LangRep* m = bs[i].transition(q, a)) nfas[i][a].emplace(q, as_nfa(*m));

  using Tuple = std::vector<StateId>;
  struct Inhabitant {
    Tuple states;
    SymbolId label;
    std::vector<std::size_t> kids;  // indices into inhabited
  };
  std::vector<Inhabitant> inhabited;
  std::set<Tuple> known;

  // shortest word over inhabited tuples accepted componentwise by the given NFAs
  auto find_word = [&](const std::vector<const Nfa*>& ms, std::size_t limit) -> std::optional<std::vector<std::size_t>> {
    using Config = std::vector<StateId>;
    std::map<Config, std::pair<Config, std::size_t>> parent;
    std::deque<Config> queue;
    auto is_goal = [&](const Config& c) {
      for (std::size_t i = 0; i < n; ++i)
        if (!ms[i]->is_final(c[i])) return false;
      return true;
    };
    // initial configurations: product of initial sets
    std::vector<Config> starts{{}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Config> next;
      for (const Config& c : starts)
        for (StateId q : ms[i]->initial()) {
          Config d = c;
          d.push_back(q);
          next.push_back(d);
        }
      starts = std::move(next);
    }
    for (const Config& c : starts)
      if (!parent.count(c)) {
        parent[c] = {{}, SIZE_MAX};
        queue.push_back(c);
      }
    while (!queue.empty()) {
      Config c = queue.front();
      queue.pop_front();
      if (is_goal(c)) {
        std::vector<std::size_t> w;
        for (Config cur = c; parent[cur].second != SIZE_MAX; cur = parent[cur].first) w.push_back(parent[cur].second);
        std::reverse(w.begin(), w.end());
        return w;
      }
      for (std::size_t t = 0; t < limit; ++t) {
        std::vector<Config> nexts{{}};
        for (std::size_t i = 0; i < n && !nexts.empty(); ++i) {
          std::vector<Config> grown;
          for (const Config& g : nexts)
            for (StateId p : ms[i]->successors(c[i], inhabited[t].states[i])) {
              Config h = g;
              h.push_back(p);
              grown.push_back(h);
            }
          nexts = std::move(grown);
        }
        for (Config& d : nexts)
          if (!parent.count(d)) {
            parent[d] = {c, t};
            queue.push_back(std::move(d));
          }
      }
    }
    return std::nullopt;
  };

  while (true) {
    const std::size_t limit = inhabited.size();
    bool grew = false;
    Tuple q(n, 0);
    while (true) {
      if (!known.count(q)) {
        for (SymbolId a = 0; a < sigma.size(); ++a) {
          std::vector<const Nfa*> ms;
          for (std::size_t i = 0; i < n; ++i) {
            auto it = nfas[i].find(a);
            if (it == nfas[i].end()) break;
            auto jt = it->second.find(q[i]);
            if (jt == it->second.end()) break;
            ms.push_back(&jt->second);
          }
          if (ms.size() != n) continue;
          if (auto w = find_word(ms, limit)) {
            inhabited.push_back({q, a, *w});
            known.insert(q);
            grew = true;
            break;
          }
        }
      }
      std::size_t i = n;
      while (i > 0 && q[i - 1] + 1 == bs[i - 1].states().size()) q[--i] = 0;
      if (i == 0) break;
      ++q[i - 1];
    }
    if (!grew) break;
  }
  std::function<Node(std::size_t)> build = [&](std::size_t k) {
    Node node{sigma.symbol(inhabited[k].label), {}};
    for (std::size_t c : inhabited[k].kids) node.children.push_back(build(c));
    return node;
  };
  for (std::size_t k = 0; k < inhabited.size(); ++k) {
    bool fin = true;
    for (std::size_t i = 0; i < n; ++i) fin = fin && bs[i].is_final(inhabited[k].states[i]);
    if (fin) return {false, Tree(build(k))};
  }
  return {};
}

NtaEmptiness nta_empty(const NtAutomaton& b) { return nta_intersection_empty({b}); }

bool is_bottom_up_deterministic(const NtAutomaton& b, std::size_t cap) {
  for (SymbolId a = 0; a < b.alphabet().size(); ++a)
    for (StateId q = 0; q < b.states().size(); ++q)
      for (StateId r = q + 1; r < b.states().size(); ++r) {
        const LangRep* m = b.transition(q, a);
        const LangRep* k = b.transition(r, a);
        if (!m || !k) continue;
        std::vector<Dfa> ds{m->to_dfa(cap), k->to_dfa(cap)};
        if (!dfa_intersection_empty(ds).empty) return false;
      }
  return true;
}

// ---- TDBTA

TdbtAutomaton::TdbtAutomaton(std::vector<Label> states, std::vector<Label> internal, std::vector<Label> leaves,
                             Label start)
    : states_(std::move(states)), internal_(std::move(internal)), leaves_(std::move(leaves)), start_(std::move(start)) {}

void TdbtAutomaton::set_transition(const Label& q, const Label& a, std::vector<Label> rhs) {
  delta_.insert_or_assign({q, a}, std::move(rhs));
}

const std::vector<Label>* TdbtAutomaton::transition(const Label& q, const Label& a) const {
  auto it = delta_.find({q, a});
  return it == delta_.end() ? nullptr : &it->second;
}

bool TdbtAutomaton::is_leaf_label(const Label& a) const {
  return std::find(leaves_.begin(), leaves_.end(), a) != leaves_.end();
}

bool TdbtAutomaton::is_internal_label(const Label& a) const {
  return std::find(internal_.begin(), internal_.end(), a) != internal_.end();
}

std::vector<std::string> tdbta_validate(const TdbtAutomaton& a) {
  std::vector<std::string> out;
  auto is_state = [&](const Label& q) {
    return std::find(a.states().begin(), a.states().end(), q) != a.states().end();
  };
  if (!is_state(a.start())) out.push_back("start state '" + a.start() + "' is not a state");
  for (const Label& l : a.internal_labels())
    if (a.is_leaf_label(l)) out.push_back("label '" + l + "' is both internal and leaf");
  for (const auto& [key, rhs] : a.transitions()) {
    const auto& [q, l] = key;
    std::string where = "(" + q + ", " + l + ")";
    if (!is_state(q)) out.push_back(where + ": unknown state");
    if (a.is_internal_label(l)) {
      if (rhs.empty() || rhs.size() > 2) out.push_back(where + ": internal label needs 1 or 2 states");
    } else if (a.is_leaf_label(l)) {
      if (!rhs.empty()) out.push_back(where + ": leaf label needs the empty string");
    } else {
      out.push_back(where + ": unknown label");
    }
    for (const Label& p : rhs)
      if (!is_state(p)) out.push_back(where + ": unknown state '" + p + "'");
  }
  return out;
}

namespace {

bool tdbta_run(const TdbtAutomaton& a, const Label& q, const Node& n) {
  if (n.children.size() > 2) throw MalformedTree("node '" + n.label + "' has more than two children");
  if (a.is_leaf_label(n.label) && !n.children.empty())
    throw MalformedTree("leaf label '" + n.label + "' has children");
  const std::vector<Label>* rhs = a.transition(q, n.label);
  if (!rhs || rhs->size() != n.children.size()) return false;
  for (std::size_t i = 0; i < rhs->size(); ++i)
    if (!tdbta_run(a, (*rhs)[i], n.children[i])) return false;
  return true;
}

}  // namespace

bool tdbta_membership(const TdbtAutomaton& a, const Tree& t) {
  if (t.is_empty()) return false;
  return tdbta_run(a, a.start(), t.root());
}

NtAutomaton tdbta_to_nta(const TdbtAutomaton& a) {
  std::vector<Label> sigma = a.internal_labels();
  sigma.insert(sigma.end(), a.leaf_labels().begin(), a.leaf_labels().end());
  Alphabet qs(a.states());
  NtAutomaton b(qs, Alphabet(sigma));
  for (const auto& [key, rhs] : a.transitions()) {
    std::vector<Regex> parts;
    for (const Label& p : rhs) parts.push_back(Regex::symbol(p));
    b.set_transition(key.first, key.second, LangRep::from_regex(Regex::concat(std::move(parts)), qs));
  }
  b.set_final(a.start());
  return b;
}

// ---- enumeration

namespace {

// Words of L(m) of length ≤ width over symbols with nonempty lists, guided by an NFA.
void words_upto(const Nfa& a, const std::vector<std::vector<Node>>& below, std::size_t width,
                std::vector<SymbolWord>& out) {
  SymbolWord w;
  std::vector<StateId> init(a.initial().begin(), a.initial().end());
  std::function<void(const std::vector<StateId>&)> go = [&](const std::vector<StateId>& cur) {
    if (any_final(a, cur)) out.push_back(w);
    if (w.size() == width) return;
    for (SymbolId c = 0; c < below.size(); ++c) {
      if (below[c].empty()) continue;
      auto next = step(a, cur, c);
      if (next.empty()) continue;
      w.push_back(c);
      go(next);
      w.pop_back();
    }
  };
  go(init);
}

}  // namespace

TreeEnumerator::TreeEnumerator(const Dtd& d, std::size_t max_depth, std::size_t max_width, std::size_t cap)
    : d_(d), max_depth_(max_depth), max_width_(max_width), cap_(cap) {
  Productivity p = productive_symbols(d);
  if (!p.productive[d.start_id()]) {
    exhaustive_ = true;
    return;
  }
  Dtd r = dtd_reduce(d);
  SymbolMask live = live_symbols(r);
  // every live content model bounded by the width, and the symbol graph acyclic within the depth
  for (SymbolId a = 0; a < r.size(); ++a) {
    if (!live[a]) continue;
    auto longest = max_word_length(as_nfa(r.content(a)));
    if (!longest || *longest > static_cast<long>(max_width)) return;
  }
  std::vector<int> height(r.size(), 0), color(r.size(), 0);
  bool cyclic = false;
  std::function<int(SymbolId)> h = [&](SymbolId a) -> int {
    if (color[a] == 2) return height[a];
    if (color[a] == 1) {
      cyclic = true;
      return 0;
    }
    color[a] = 1;
    int best = 0;
    for (SymbolId c = 0; c < r.size() && !cyclic; ++c)
      if (live[c] && r.content(a).witness_containing(c, &live)) best = std::max(best, h(c));
    color[a] = 2;
    return height[a] = best + 1;
  };
  int total = h(r.start_id());
  exhaustive_ = !cyclic && total <= static_cast<int>(max_depth_);
}

std::vector<Node> TreeEnumerator::level_for(SymbolId a, const std::vector<std::vector<Node>>& below) {
  std::vector<Node> out;
  std::vector<SymbolWord> words;
  words_upto(as_nfa(d_.content(a)), below, max_width_, words);
  for (const SymbolWord& w : words) {
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      Node n{d_.alphabet().symbol(a), {}};
      for (std::size_t i = 0; i < w.size(); ++i) n.children.push_back(below[w[i]][idx[i]]);
      out.push_back(std::move(n));
      if (++produced_ > cap_) throw BoundsTooLarge("tree enumeration exceeds " + std::to_string(cap_) + " trees");
      std::size_t i = w.size();
      while (i > 0 && idx[i - 1] + 1 == below[w[i - 1]].size()) idx[--i] = 0;
      if (i == 0) break;
      ++idx[i - 1];
    }
  }
  return out;
}

const std::vector<Node>& TreeEnumerator::trees() {
  if (built_) return roots_;
  built_ = true;
  if (max_depth_ == 0) return roots_;
  std::vector<std::vector<Node>> below(d_.size());
  // levels 1..D-1 for every symbol, then the root level for the start symbol only
  for (std::size_t k = 1; k < max_depth_; ++k) {
    std::vector<std::vector<Node>> level(d_.size());
    for (SymbolId a = 0; a < d_.size(); ++a) level[a] = level_for(a, below);
    below = std::move(level);
  }
  roots_ = level_for(d_.start_id(), below);
  std::stable_sort(roots_.begin(), roots_.end(),
                   [](const Node& x, const Node& y) { return depth(x) < depth(y); });
  return roots_;
}

}  // namespace xtc

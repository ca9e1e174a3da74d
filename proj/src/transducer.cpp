#include "xtc/transducer.hpp"

#include <algorithm>

#include "scan.hpp"
#include "xtc/error.hpp"

namespace xtc {

namespace {

RhsNode parse_rhs_node(detail::Scanner& sc);

Rhs parse_rhs_hedge(detail::Scanner& sc) {
  Rhs h;
  while (sc.peek() == '$' || sc.at_ident()) h.push_back(parse_rhs_node(sc));
  return h;
}

RhsNode parse_rhs_node(detail::Scanner& sc) {
  if (sc.accept('$')) return state_ref(sc.ident());
  RhsNode n{sc.ident(), false, {}};
  if (sc.accept('(')) {
    n.children = parse_rhs_hedge(sc);
    sc.expect(')');
  }
  return n;
}

void write(const RhsNode& n, std::string& out) {
  if (n.is_state) {
    out += '$' + n.label;
    return;
  }
  out += n.label;
  if (n.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ' ';
    write(n.children[i], out);
  }
  out += ')';
}

void substitute(const Transducer& t, const Rhs& h, const Hedge& kids, Hedge& out) {
  for (const RhsNode& n : h) {
    if (n.is_state) {
      for (const Node& k : kids) {
        Hedge part = apply_state(t, n.label, k);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
      }
      continue;
    }
    Node m{n.label, {}};
    substitute(t, n.children, kids, m.children);
    out.push_back(std::move(m));
  }
}

void check_rhs(const Transducer& t, const std::string& where, const Rhs& h, std::vector<Violation>& out) {
  for (const RhsNode& n : h) {
    if (n.is_state) {
      if (!t.has_state(n.label))
        out.push_back({ViolationKind::UnknownState, where + ": unknown state '" + n.label + "'"});
      if (!n.children.empty())
        out.push_back({ViolationKind::StateNotLeaf, where + ": state '" + n.label + "' has children"});
    } else if (!t.alphabet().contains(n.label)) {
      out.push_back({ViolationKind::UnknownLabel, where + ": unknown label '" + n.label + "'"});
    }
    check_rhs(t, where, n.children, out);
  }
}

std::size_t width_of(const Rhs& h) {
  std::size_t here = std::count_if(h.begin(), h.end(), [](const RhsNode& n) { return n.is_state; });
  for (const RhsNode& n : h) here = std::max(here, width_of(n.children));
  return here;
}

}  // namespace

Rhs parse_rhs(std::string_view text) {
  detail::Scanner sc(text);
  Rhs h;
  if (sc.at_ident()) {
    // `eps` alone denotes the empty hedge
    std::string_view r = sc.rest();
    std::size_t n = 0;
    while (n < r.size() && detail::ident_char(r[n])) ++n;
    if (r.substr(0, n) == "eps") {
      sc.ident();
      if (!sc.at_end()) sc.fail("'eps' must stand alone");
      return h;
    }
  }
  h = parse_rhs_hedge(sc);
  if (!sc.at_end()) sc.fail("unexpected input in rule right-hand side");
  return h;
}

std::string to_string(const Rhs& h) {
  if (h.empty()) return "eps";
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ' ';
    write(h[i], s);
  }
  return s;
}

Transducer::Transducer(std::vector<Label> states, Alphabet sigma, Label initial)
    : states_(std::move(states)), sigma_(std::move(sigma)), initial_(std::move(initial)) {}

void Transducer::add_rule(const Label& q, const Label& a, Rhs rhs) {
  if (!rules_.emplace(std::make_pair(q, a), std::move(rhs)).second)
    throw SemanticError("second rule for (" + q + ", " + a + ")");
}

bool Transducer::has_state(const Label& q) const {
  return std::find(states_.begin(), states_.end(), q) != states_.end();
}

const Rhs* Transducer::rule(const Label& q, const Label& a) const {
  auto it = rules_.find({q, a});
  return it == rules_.end() ? nullptr : &it->second;
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::StateNotLeaf: return "StateNotLeaf";
    case ViolationKind::InitialRhsShape: return "InitialRhsShape";
    case ViolationKind::UnknownState: return "UnknownState";
    case ViolationKind::UnknownLabel: return "UnknownLabel";
  }
  return "?";
}

std::vector<Violation> validate(const Transducer& t) {
  std::vector<Violation> out;
  if (!t.has_state(t.initial()))
    out.push_back({ViolationKind::UnknownState, "initial state '" + t.initial() + "' is not declared"});
  for (const auto& [key, rhs] : t.rules()) {
    const auto& [q, a] = key;
    std::string where = "(" + q + ", " + a + ")";
    if (!t.has_state(q)) out.push_back({ViolationKind::UnknownState, where + ": unknown state '" + q + "'"});
    if (!t.alphabet().contains(a)) out.push_back({ViolationKind::UnknownLabel, where + ": unknown label '" + a + "'"});
    check_rhs(t, where, rhs, out);
    if (q == t.initial() && !rhs.empty() && (rhs.size() != 1 || rhs[0].is_state))
      out.push_back({ViolationKind::InitialRhsShape, where + ": initial rule must produce one Σ-rooted tree"});
  }
  return out;
}

Hedge apply_state(const Transducer& t, const Label& q, const Node& input) {
  Hedge out;
  if (const Rhs* h = t.rule(q, input.label)) substitute(t, *h, input.children, out);
  return out;
}

Hedge apply_state(const Transducer& t, const Label& q, const Tree& input) {
  if (input.is_empty()) return {};
  return apply_state(t, q, input.root());
}

Tree apply(const Transducer& t, const Tree& input) {
  Hedge h = apply_state(t, t.initial(), input);
  if (h.empty()) return Tree::empty();
  if (h.size() > 1) throw SemanticError("initial state produced a hedge of " + std::to_string(h.size()) + " trees");
  return Tree(std::move(h[0]));
}

Word state_image(const Transducer& t, const Label& q, const Word& w) {
  Word out;
  for (const Label& a : w) {
    Word part = top(apply_state(t, q, leaf(a)));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

TransducerAnalysis analyze(const Transducer& t) {
  TransducerAnalysis a;
  for (const auto& [key, rhs] : t.rules()) {
    if (std::any_of(rhs.begin(), rhs.end(), [](const RhsNode& n) { return n.is_state; })) a.nondeleting = false;
    a.copying_width = std::max(a.copying_width, width_of(rhs));
  }
  return a;
}

Transducer identity_transducer(const Alphabet& sigma, const Label& q) {
  Transducer t({q}, sigma, q);
  for (const Label& a : sigma.symbols()) t.add_rule(q, a, {RhsNode{a, false, {state_ref(q)}}});
  return t;
}

}  // namespace xtc

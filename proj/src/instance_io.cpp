#include "xtc/instance_io.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "scan.hpp"
#include "xtc/error.hpp"

namespace xtc {

namespace {

struct Line {
  std::size_t no;
  std::string text;  // comment stripped
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t no = 0, b = 0;
  while (b <= text.size()) {
    std::size_t e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    ++no;
    std::string l(text.substr(b, e - b));
    if (auto h = l.find('#'); h != std::string::npos) l.erase(h);
    if (l.find_first_not_of(" \t\r") != std::string::npos) out.push_back({no, l});
    b = e + 1;
  }
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  for (std::string x; in >> x;) w.push_back(x);
  return w;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b <= s.size()) {
    std::size_t e = s.find(',', b);
    if (e == std::string::npos) e = s.size();
    if (e > b) out.push_back(s.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

bool is_ident(const std::string& s) {
  if (s.empty() || !detail::ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), detail::ident_char);
}

void add_unique(std::vector<Label>& xs, const Label& x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
}

// Runs a sub-grammar parser on a body that starts at column `col` of line `no`.
template <class F>
auto at_line(std::size_t no, std::size_t col, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.message(), no, e.column() ? col + e.column() - 1 : col);
  } catch (const SemanticError& e) {
    if (e.line()) throw;
    throw SemanticError(e.what(), no);
  } catch (const UnknownSymbol& e) {
    throw SemanticError(e.what(), no);
  }
}

struct Header {
  std::string keyword;
  std::map<std::string, std::string> options;
  std::vector<std::string> args;
  std::size_t no;
};

Header header(const Line& l) {
  auto w = words(l.text);
  Header h{w[0], {}, {}, l.no};
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto eq = w[i].find('=');
    if (eq == std::string::npos) {
      h.args.push_back(w[i]);
    } else {
      if (!h.options.emplace(w[i].substr(0, eq), w[i].substr(eq + 1)).second)
        throw SemanticError("option '" + w[i].substr(0, eq) + "' given twice", l.no);
    }
  }
  return h;
}

std::string option(const Header& h, const std::string& key, bool required) {
  auto it = h.options.find(key);
  if (it == h.options.end()) {
    if (required) throw SemanticError(h.keyword + " needs " + key + "=...", h.no);
    return {};
  }
  return it->second;
}

void only_options(const Header& h, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : h.options)
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw SemanticError("unknown option '" + k + "' for " + h.keyword, h.no);
  if (!h.args.empty()) throw SemanticError("unexpected '" + h.args[0] + "' after " + h.keyword, h.no);
}

// `(q, a) -> rest` or `a -> rest`
struct Rule {
  std::size_t no;
  std::optional<Label> state;
  Label label;
  std::string kind;  // content lines only
  std::string body;
  std::size_t col;   // 1-based column of body
};

Rule rule_line(const Line& l, bool paired, bool with_kind) {
  detail::Scanner sc(l.text, l.no);
  Rule r{l.no, std::nullopt, {}, {}, {}, 0};
  if (paired) {
    sc.expect('(');
    r.state = sc.ident();
    sc.expect(',');
    r.label = sc.ident();
    sc.expect(')');
  } else {
    r.label = sc.ident();
  }
  if (!sc.accept("->")) sc.fail("expected '->'");
  if (with_kind) {
    r.kind = sc.ident();
    if (r.kind != "regex" && r.kind != "sl" && r.kind != "nfa" && r.kind != "dfa")
      sc.fail("unknown content kind '" + r.kind + "' (regex, sl, nfa or dfa)");
    sc.expect(':');
  }
  sc.skip_ws();
  r.col = sc.pos() + 1;
  r.body = std::string(sc.rest());
  return r;
}

LangRep content(const Rule& r, const Alphabet& alpha) {
  return at_line(r.no, r.col, [&] {
    if (r.kind == "regex") return LangRep::from_regex(parse_regex(r.body), alpha);
    if (r.kind == "sl") return LangRep::from_sl(parse_sl(r.body, alpha), alpha);
    Nfa a = parse_automaton(r.body, alpha);
    if (r.kind == "nfa") return LangRep::from_nfa(std::move(a));
    return LangRep::from_dfa(nfa_as_dfa(a));
  });
}

void regex_symbols(const Regex& r, std::vector<Label>& out) {
  if (r.kind() == Regex::Kind::Symbol) add_unique(out, r.name());
  for (const Regex& p : r.parts()) regex_symbols(p, out);
}

Dtd build_dtd(const Header& h, const std::vector<Rule>& rules, const Alphabet& sigma) {
  only_options(h, {"start"});
  Label start = option(h, "start", true);
  if (!sigma.contains(start)) throw SemanticError("start symbol '" + start + "' is not in the alphabet", h.no);
  Dtd d(sigma, start);
  std::map<Label, std::size_t> seen;
  for (const Rule& r : rules) {
    if (!sigma.contains(r.label)) throw SemanticError("unknown symbol '" + r.label + "'", r.no);
    if (auto [it, fresh] = seen.emplace(r.label, r.no); !fresh)
      throw SemanticError("second content model for '" + r.label + "' (first on line " + std::to_string(it->second) + ")", r.no);
    d.set_content(r.label, content(r, sigma));
  }
  return d;
}

NtAutomaton build_nta(const Header& h, const std::vector<Rule>& rules, const Alphabet& sigma) {
  only_options(h, {"final", "states"});
  std::vector<Label> states = split_commas(option(h, "states", false));
  std::vector<Label> finals = split_commas(option(h, "final", true));
  for (const Label& q : finals) add_unique(states, q);
  for (const Rule& r : rules) add_unique(states, *r.state);
  for (const Rule& r : rules)
    if (r.kind == "regex") regex_symbols(at_line(r.no, r.col, [&] { return parse_regex(r.body); }), states);
  for (const Label& q : states)
    if (!is_ident(q)) throw SemanticError("bad state name '" + q + "'", h.no);
  Alphabet qs(states);
  NtAutomaton b(qs, sigma);
  for (const Label& q : finals) b.set_final(q);
  std::set<std::pair<Label, Label>> seen;
  for (const Rule& r : rules) {
    if (!sigma.contains(r.label)) throw SemanticError("unknown symbol '" + r.label + "'", r.no);
    if (!seen.emplace(*r.state, r.label).second)
      throw SemanticError("second transition for (" + *r.state + ", " + r.label + ")", r.no);
    b.set_transition(*r.state, r.label, content(r, qs));
  }
  return b;
}

Transducer build_transducer(const Header& h, const std::vector<Rule>& rules, const Alphabet& sigma) {
  only_options(h, {"init", "states"});
  Label init = option(h, "init", true);
  std::vector<Label> states{init};
  for (const Label& q : split_commas(option(h, "states", false))) add_unique(states, q);
  std::vector<std::pair<const Rule*, Rhs>> parsed;
  for (const Rule& r : rules) {
    add_unique(states, *r.state);
    parsed.emplace_back(&r, at_line(r.no, r.col, [&] { return parse_rhs(r.body); }));
  }
  Transducer t(states, sigma, init);
  for (auto& [r, h2] : parsed) {
    if (!sigma.contains(r->label)) throw SemanticError("unknown symbol '" + r->label + "'", r->no);
    Rhs copy = h2;
    at_line(r->no, r->col, [&] {
      t.add_rule(*r->state, r->label, std::move(copy));
      return 0;
    });
  }
  if (auto v = validate(t); !v.empty()) {
    std::size_t no = h.no;
    for (const auto& [r, h2] : parsed)
      if (v[0].message.rfind("(" + *r->state + ", " + r->label + ")", 0) == 0) no = r->no;
    throw SemanticError(v[0].message, no);
  }
  return t;
}

bool is_header(const Line& l, std::initializer_list<const char*> keywords) {
  if (l.text.find("->") != std::string::npos) return false;
  auto w = words(l.text);
  return std::any_of(keywords.begin(), keywords.end(), [&](const char* k) { return w[0] == k; });
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::optional<Header> alpha, in, out, trans;
  std::vector<Rule> in_rules, out_rules, trans_rules;
  std::vector<Rule>* cur = nullptr;
  bool out_is_nta = false;
  for (const Line& l : split_lines(text)) {
    if (is_header(l, {"alphabet", "input-dtd", "output-dtd", "output-nta", "transducer"})) {
      Header h = header(l);
      auto take = [&](std::optional<Header>& slot, std::vector<Rule>* rules) {
        if (slot) throw SemanticError("second " + h.keyword + " section (first on line " + std::to_string(slot->no) + ")", l.no);
        slot = h;
        cur = rules;
      };
      if (h.keyword == "alphabet") take(alpha, nullptr);
      else if (h.keyword == "input-dtd") take(in, &in_rules);
      else if (h.keyword == "transducer") take(trans, &trans_rules);
      else {
        if (out) throw SemanticError("second output schema (first on line " + std::to_string(out->no) + ")", l.no);
        out_is_nta = h.keyword == "output-nta";
        take(out, &out_rules);
      }
      continue;
    }
    if (!cur) {
      if (alpha && words(l.text).size() && !in && !out && !trans) {
        // alphabet continues on the next line
        for (const auto& w : words(l.text)) alpha->args.push_back(w);
        continue;
      }
      throw SyntaxError("line outside of a section", l.no);
    }
    const bool paired = cur == &trans_rules || (cur == &out_rules && out_is_nta);
    cur->push_back(rule_line(l, paired, cur != &trans_rules));
  }
  if (!alpha) throw SemanticError("missing alphabet section");
  if (!in) throw SemanticError("missing input-dtd section");
  if (!out) throw SemanticError("missing output schema (output-dtd or output-nta)");
  if (!trans) throw SemanticError("missing transducer section");

  if (!alpha->options.empty()) throw SemanticError("alphabet takes symbols only", alpha->no);
  std::vector<Label> syms;
  for (const auto& a : alpha->args) {
    if (!is_ident(a)) throw SemanticError("bad symbol name '" + a + "'", alpha->no);
    if (std::find(syms.begin(), syms.end(), a) != syms.end())
      throw SemanticError("symbol '" + a + "' declared twice", alpha->no);
    syms.push_back(a);
  }
  if (syms.empty()) throw SemanticError("empty alphabet", alpha->no);
  Alphabet sigma(syms);

  Dtd din = build_dtd(*in, in_rules, sigma);
  OutputSchema output = out_is_nta ? OutputSchema(build_nta(*out, out_rules, sigma))
                                   : OutputSchema(build_dtd(*out, out_rules, sigma));
  Transducer t = build_transducer(*trans, trans_rules, sigma);
  return {std::move(din), std::move(output), std::move(t)};
}

namespace {

bool is_empty_content(const LangRep& m) {
  return m.kind() == LangRep::Kind::Regex && m.regex().kind() == Regex::Kind::Empty;
}

void write_dtd(const Dtd& d, std::string& s) {
  for (SymbolId a = 0; a < d.size(); ++a)
    if (!is_empty_content(d.content(a))) s += "  " + d.alphabet().symbol(a) + " -> " + d.content(a).to_text() + "\n";
}

std::string join_commas(const std::vector<Label>& xs) {
  std::string s;
  for (const Label& x : xs) s += (s.empty() ? "" : ",") + x;
  return s;
}

}  // namespace

std::string write_dtd(const Dtd& d) {
  std::string s;
  write_dtd(d, s);
  return s;
}

std::string write_instance(const Instance& inst) {
  std::string s = "alphabet";
  for (const Label& a : inst.transducer.alphabet().symbols()) s += " " + a;
  s += "\ninput-dtd start=" + inst.input.start() + "\n";
  write_dtd(inst.input, s);
  if (const Dtd* d = std::get_if<Dtd>(&inst.output)) {
    s += "output-dtd start=" + d->start() + "\n";
    write_dtd(*d, s);
  } else {
    const NtAutomaton& b = std::get<NtAutomaton>(inst.output);
    std::vector<Label> fin;
    for (StateId q = 0; q < b.states().size(); ++q)
      if (b.is_final(q)) fin.push_back(b.states().symbol(q));
    s += "output-nta final=" + join_commas(fin) + " states=" + join_commas(b.states().symbols()) + "\n";
    for (StateId q = 0; q < b.states().size(); ++q)
      for (SymbolId a = 0; a < b.alphabet().size(); ++a)
        if (const LangRep* m = b.transition(q, a))
          s += "  (" + b.states().symbol(q) + ", " + b.alphabet().symbol(a) + ") -> " + m->to_text() + "\n";
  }
  const Transducer& t = inst.transducer;
  s += "transducer init=" + t.initial() + " states=" + join_commas(t.states()) + "\n";
  for (const auto& [key, rhs] : t.rules()) s += "  (" + key.first + ", " + key.second + ") -> " + to_string(rhs) + "\n";
  return s;
}

Nfa parse_automaton_file(std::string_view text, const Alphabet& sigma) {
  // blank out comments so the kind prefix may follow them; columns stay put
  std::string blanked(text);
  for (std::size_t i = 0; i < blanked.size(); ++i)
    if (blanked[i] == '#')
      for (; i < blanked.size() && blanked[i] != '\n'; ++i) blanked[i] = ' ';
  std::string_view body = blanked;
  std::size_t first = body.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (body.substr(first, 4) == "nfa:" || body.substr(first, 4) == "dfa:")) {
    bool det = body.substr(first, 4) == "dfa:";
    std::string padded(first + 4, ' ');
    padded += body.substr(first + 4);
    Nfa a = parse_automaton(padded, sigma);
    if (det) nfa_as_dfa(a);
    return a;
  }
  return parse_automaton(body, sigma);
}

TdbtAutomaton parse_tdbta(std::string_view text) {
  std::optional<Header> head;
  std::vector<std::tuple<std::size_t, Label, Label, std::vector<Label>>> trans;
  for (const Line& l : split_lines(text)) {
    if (is_header(l, {"tdbta"})) {
      if (head) throw SemanticError("second tdbta header", l.no);
      head = header(l);
      only_options(*head, {"start", "states", "internal", "leaves"});
      continue;
    }
    if (!head) throw SyntaxError("expected 'tdbta start=...' first", l.no);
    Rule r = rule_line(l, true, false);
    detail::Scanner sc(r.body, l.no);
    std::vector<Label> rhs;
    if (sc.at_ident() && words(r.body) == std::vector<std::string>{"eps"}) {
      sc.ident();
    } else {
      while (!sc.at_end()) rhs.push_back(at_line(l.no, r.col, [&] { return sc.ident(); }));
    }
    trans.emplace_back(l.no, *r.state, r.label, rhs);
  }
  if (!head) throw SemanticError("missing tdbta header");
  Label start = option(*head, "start", true);
  std::vector<Label> states{start};
  for (const Label& q : split_commas(option(*head, "states", false))) add_unique(states, q);
  for (const auto& [no, q, a, r] : trans) {
    add_unique(states, q);
    for (const Label& p : r) add_unique(states, p);
  }
  std::vector<Label> internal = kTdbtaInternal, leaves = kTdbtaLeaves;
  if (head->options.count("internal")) internal = split_commas(head->options.at("internal"));
  if (head->options.count("leaves")) leaves = split_commas(head->options.at("leaves"));
  TdbtAutomaton a(states, internal, leaves, start);
  std::set<std::pair<Label, Label>> seen;
  for (const auto& [no, q, lab, r] : trans) {
    if (!seen.emplace(q, lab).second) throw SemanticError("second transition for (" + q + ", " + lab + ")", no);
    a.set_transition(q, lab, r);
  }
  if (auto v = tdbta_validate(a); !v.empty()) throw SemanticError(v[0]);
  return a;
}

TilingSystem parse_tiling(std::string_view text) {
  TilingSystem s;
  bool has_top = false, has_bottom = false;
  for (const Line& l : split_lines(text)) {
    auto w = words(l.text);
    const std::string& k = w[0];
    std::vector<std::string> args(w.begin() + 1, w.end());
    for (const auto& a : args)
      if (!is_ident(a)) throw SyntaxError("bad tile name '" + a + "'", l.no);
    auto known = [&](const std::string& x) {
      if (std::find(s.tiles.begin(), s.tiles.end(), x) == s.tiles.end())
        throw SemanticError("unknown tile '" + x + "'", l.no);
    };
    if (k == "tiles") {
      for (const auto& a : args) add_unique(s.tiles, a);
    } else if (k == "h" || k == "v") {
      if (args.size() != 2) throw SyntaxError(k + " takes two tiles", l.no);
      known(args[0]);
      known(args[1]);
      (k == "h" ? s.horizontal : s.vertical).emplace(args[0], args[1]);
    } else if (k == "top" || k == "bottom") {
      for (const auto& a : args) known(a);
      (k == "top" ? s.top : s.bottom) = args;
      (k == "top" ? has_top : has_bottom) = true;
    } else {
      throw SyntaxError("unknown tiling line '" + k + "'", l.no);
    }
  }
  if (!has_top || !has_bottom) throw SemanticError("tiling needs top and bottom rows");
  if (s.top.size() != s.bottom.size()) throw SemanticError("top and bottom rows differ in width");
  return s;
}

}  // namespace xtc

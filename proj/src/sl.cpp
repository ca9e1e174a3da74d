#include <algorithm>

#include "scan.hpp"
#include "xtc/error.hpp"
#include "xtc/strlang.hpp"

namespace xtc {

SlFormula SlFormula::truth() { return SlFormula(std::make_shared<const Rep>(Rep{Kind::True, {}, 0, {}})); }

SlFormula SlFormula::eq(Label a, std::uint64_t i) {
  return SlFormula(std::make_shared<const Rep>(Rep{Kind::Eq, std::move(a), i, {}}));
}

SlFormula SlFormula::ge(Label a, std::uint64_t i) {
  return SlFormula(std::make_shared<const Rep>(Rep{Kind::Ge, std::move(a), i, {}}));
}

SlFormula SlFormula::negate(SlFormula f) {
  return SlFormula(std::make_shared<const Rep>(Rep{Kind::Not, {}, 0, {std::move(f)}}));
}

SlFormula SlFormula::conj(std::vector<SlFormula> fs) {
  if (fs.empty()) return truth();
  if (fs.size() == 1) return fs[0];
  return SlFormula(std::make_shared<const Rep>(Rep{Kind::And, {}, 0, std::move(fs)}));
}

SlFormula SlFormula::disj(std::vector<SlFormula> fs) {
  if (fs.empty()) return falsity();
  if (fs.size() == 1) return fs[0];
  return SlFormula(std::make_shared<const Rep>(Rep{Kind::Or, {}, 0, std::move(fs)}));
}

ParikhVector parikh(const Word& w) {
  ParikhVector v;
  for (const Label& a : w) ++v[a];
  return v;
}

bool sl_eval(const SlFormula& f, const ParikhVector& v) {
  switch (f.kind()) {
    case SlFormula::Kind::True: return true;
    case SlFormula::Kind::Eq:
    case SlFormula::Kind::Ge: {
      auto it = v.find(f.symbol());
      std::uint64_t n = it == v.end() ? 0 : it->second;
      return f.kind() == SlFormula::Kind::Eq ? n == f.count() : n >= f.count();
    }
    case SlFormula::Kind::Not: return !sl_eval(f.parts()[0], v);
    case SlFormula::Kind::And:
      for (const auto& g : f.parts())
        if (!sl_eval(g, v)) return false;
      return true;
    case SlFormula::Kind::Or:
      for (const auto& g : f.parts())
        if (sl_eval(g, v)) return true;
      return false;
  }
  return false;
}

std::uint64_t sl_max_int(const SlFormula& f) {
  std::uint64_t k = 0;
  if (f.kind() == SlFormula::Kind::Eq || f.kind() == SlFormula::Kind::Ge) k = f.count();
  for (const auto& g : f.parts()) k = std::max(k, sl_max_int(g));
  return k;
}

namespace {

void collect_symbols(const SlFormula& f, std::set<Label>& out) {
  if (f.kind() == SlFormula::Kind::Eq || f.kind() == SlFormula::Kind::Ge) out.insert(f.symbol());
  for (const auto& g : f.parts()) collect_symbols(g, out);
}

SlFormula parse_impl(detail::Scanner& sc, const Alphabet& sigma);

SlFormula parse_unary(detail::Scanner& sc, const Alphabet& sigma) {
  if (sc.accept('!')) return SlFormula::negate(parse_unary(sc, sigma));
  if (sc.accept('(')) {
    SlFormula f = parse_impl(sc, sigma);
    sc.expect(')');
    return f;
  }
  std::string id = sc.ident();
  if (sc.accept(">=")) return SlFormula::ge(id, sc.natural());
  if (sc.accept('=')) return SlFormula::eq(id, sc.natural());
  if (id == "true") return SlFormula::truth();
  if (id == "false" || id == "emptyset") return SlFormula::falsity();
  if (id == "emptystr") {
    std::vector<SlFormula> zs;
    for (const Label& a : sigma.symbols()) zs.push_back(SlFormula::eq(a, 0));
    return SlFormula::conj(std::move(zs));
  }
  sc.fail("expected counting atom after '" + id + "'");
}

SlFormula parse_and(detail::Scanner& sc, const Alphabet& sigma) {
  std::vector<SlFormula> fs{parse_unary(sc, sigma)};
  while (sc.accept('&')) fs.push_back(parse_unary(sc, sigma));
  return SlFormula::conj(std::move(fs));
}

SlFormula parse_or(detail::Scanner& sc, const Alphabet& sigma) {
  std::vector<SlFormula> fs{parse_and(sc, sigma)};
  while (sc.peek() == '|') {
    sc.accept('|');
    fs.push_back(parse_and(sc, sigma));
  }
  return SlFormula::disj(std::move(fs));
}

SlFormula parse_impl(detail::Scanner& sc, const Alphabet& sigma) {
  SlFormula lhs = parse_or(sc, sigma);
  if (sc.accept("->")) {
    SlFormula rhs = parse_impl(sc, sigma);
    return SlFormula::disj({SlFormula::negate(lhs), rhs});
  }
  return lhs;
}

// 0 or, 1 and, 2 unary
void write(const SlFormula& f, int ctx, std::string& out) {
  switch (f.kind()) {
    case SlFormula::Kind::True: out += "true"; return;
    case SlFormula::Kind::Eq: out += f.symbol() + "=" + std::to_string(f.count()); return;
    case SlFormula::Kind::Ge: out += f.symbol() + ">=" + std::to_string(f.count()); return;
    case SlFormula::Kind::Not:
      out += '!';
      write(f.parts()[0], 2, out);
      return;
    case SlFormula::Kind::And:
    case SlFormula::Kind::Or: {
      bool is_and = f.kind() == SlFormula::Kind::And;
      int mine = is_and ? 1 : 0;
      if (ctx > mine) out += '(';
      for (std::size_t i = 0; i < f.parts().size(); ++i) {
        if (i) out += is_and ? " & " : " | ";
        write(f.parts()[i], mine + 1, out);
      }
      if (ctx > mine) out += ')';
      return;
    }
  }
}

}  // namespace

std::set<Label> sl_symbols(const SlFormula& f) {
  std::set<Label> s;
  collect_symbols(f, s);
  return s;
}

SlFormula parse_sl(std::string_view text, const Alphabet& sigma) {
  detail::Scanner sc(text);
  SlFormula f = parse_impl(sc, sigma);
  if (!sc.at_end()) sc.fail("unexpected input in SL formula");
  for (const Label& a : sl_symbols(f))
    if (!sigma.contains(a)) throw UnknownSymbol("unknown symbol '" + a + "' in SL formula");
  return f;
}

std::string to_string(const SlFormula& f) {
  std::string s;
  write(f, 0, s);
  return s;
}

std::optional<ParikhVector> sl_sat(const SlFormula& f, const std::set<Label>& allowed) {
  const std::uint64_t top = sl_max_int(f) + 1;
  std::vector<Label> vars;
  for (const Label& a : sl_symbols(f))
    if (allowed.count(a)) vars.push_back(a);
  double cells = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) cells *= double(top + 1);
  if (cells > 1e7) throw BoxTooLarge("SL satisfiability box too large");
  ParikhVector v;
  for (const Label& a : allowed) v[a] = 0;
  std::vector<std::uint64_t> cur(vars.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = cur[i];
    if (sl_eval(f, v)) return v;
    // lexicographic increment, last variable fastest
    std::size_t i = vars.size();
    while (i > 0 && cur[i - 1] == top) cur[--i] = 0;
    if (i == 0) return std::nullopt;
    ++cur[i - 1];
  }
}

Dfa sl_to_dfa(const SlFormula& f, const Alphabet& sigma, std::size_t cap) {
  const std::uint64_t top = sl_max_int(f) + 1;
  std::vector<SymbolId> vars;
  for (const Label& a : sl_symbols(f)) vars.push_back(sigma.id(a));
  std::size_t n = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (double(n) * double(top + 1) > double(cap))
      throw StateCapExceeded("SL counting automaton exceeds state cap");
    n *= top + 1;
  }
  Dfa d(sigma, n, 0);
  std::vector<std::size_t> stride(vars.size());
  std::size_t s = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    stride[i] = s;
    s *= top + 1;
  }
  std::vector<int> var_of(sigma.size(), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) var_of[vars[i]] = static_cast<int>(i);
  ParikhVector v;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t i = 0; i < vars.size(); ++i) v[sigma.symbol(vars[i])] = (q / stride[i]) % (top + 1);
    d.set_final(static_cast<StateId>(q), sl_eval(f, v));
    for (SymbolId c = 0; c < sigma.size(); ++c) {
      std::size_t next = q;
      if (int i = var_of[c]; i >= 0 && (q / stride[i]) % (top + 1) < top) next += stride[i];
      d.set_transition(static_cast<StateId>(q), c, static_cast<StateId>(next));
    }
  }
  return d;
}

}  // namespace xtc

#include <algorithm>

#include "scan.hpp"
#include "xtc/error.hpp"
#include "xtc/strlang.hpp"

namespace xtc {

Regex Regex::empty() { return Regex(std::make_shared<const Rep>(Rep{Kind::Empty, {}, {}})); }
Regex Regex::epsilon() { return Regex(std::make_shared<const Rep>(Rep{Kind::Epsilon, {}, {}})); }
Regex Regex::symbol(Label a) { return Regex(std::make_shared<const Rep>(Rep{Kind::Symbol, std::move(a), {}})); }

Regex Regex::concat(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  for (Regex& p : parts) {
    if (p.kind() == Kind::Concat)
      flat.insert(flat.end(), p.parts().begin(), p.parts().end());
    else
      flat.push_back(std::move(p));
  }
  if (flat.empty()) return epsilon();
  if (flat.size() == 1) return flat[0];
  return Regex(std::make_shared<const Rep>(Rep{Kind::Concat, {}, std::move(flat)}));
}

Regex Regex::alt(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  for (Regex& p : parts) {
    if (p.kind() == Kind::Union)
      flat.insert(flat.end(), p.parts().begin(), p.parts().end());
    else
      flat.push_back(std::move(p));
  }
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat[0];
  return Regex(std::make_shared<const Rep>(Rep{Kind::Union, {}, std::move(flat)}));
}

Regex Regex::star(Regex r) { return Regex(std::make_shared<const Rep>(Rep{Kind::Star, {}, {std::move(r)}})); }

std::size_t Regex::size() const {
  std::size_t n = 1;
  for (const Regex& p : parts()) n += p.size();
  return n;
}

namespace {

Regex parse_union(detail::Scanner& sc);

Regex parse_atom(detail::Scanner& sc) {
  if (sc.accept('(')) {
    Regex r = parse_union(sc);
    sc.expect(')');
    return r;
  }
  std::string id = sc.ident();
  if (id == "eps") return Regex::epsilon();
  if (id == "empty") return Regex::empty();
  return Regex::symbol(id);
}

Regex parse_postfix(detail::Scanner& sc) {
  Regex r = parse_atom(sc);
  while (sc.accept('*')) r = Regex::star(r);
  return r;
}

Regex parse_concat(detail::Scanner& sc) {
  std::vector<Regex> parts;
  parts.push_back(parse_postfix(sc));
  while (sc.peek() == '(' || sc.at_ident()) parts.push_back(parse_postfix(sc));
  return Regex::concat(std::move(parts));
}

Regex parse_union(detail::Scanner& sc) {
  std::vector<Regex> parts;
  parts.push_back(parse_concat(sc));
  while (sc.accept('+')) parts.push_back(parse_concat(sc));
  return Regex::alt(std::move(parts));
}

// precedence: 0 union, 1 concat, 2 star/atom
void write(const Regex& r, int ctx, std::string& out) {
  switch (r.kind()) {
    case Regex::Kind::Empty: out += "empty"; return;
    case Regex::Kind::Epsilon: out += "eps"; return;
    case Regex::Kind::Symbol: out += r.name(); return;
    case Regex::Kind::Star:
      write(r.parts()[0], 2, out);
      out += '*';
      return;
    case Regex::Kind::Concat: {
      if (ctx > 1) out += '(';
      for (std::size_t i = 0; i < r.parts().size(); ++i) {
        if (i) out += ' ';
        write(r.parts()[i], 1, out);
      }
      if (ctx > 1) out += ')';
      return;
    }
    case Regex::Kind::Union: {
      if (ctx > 0) out += '(';
      for (std::size_t i = 0; i < r.parts().size(); ++i) {
        if (i) out += " + ";
        write(r.parts()[i], 1, out);
      }
      if (ctx > 0) out += ')';
      return;
    }
  }
}

struct Glushkov {
  const Alphabet& sigma;
  std::vector<SymbolId> pos;
  std::vector<std::vector<int>> follow;

  struct Info {
    bool nullable;
    std::vector<int> first, last;
  };

  static void merge(std::vector<int>& dst, const std::vector<int>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  }

  Info build(const Regex& r) {
    switch (r.kind()) {
      case Regex::Kind::Empty: return {false, {}, {}};
      case Regex::Kind::Epsilon: return {true, {}, {}};
      case Regex::Kind::Symbol: {
        auto id = sigma.find(r.name());
        if (!id) throw UnknownSymbol("unknown symbol '" + r.name() + "' in regex");
        int p = static_cast<int>(pos.size());
        pos.push_back(*id);
        follow.emplace_back();
        return {false, {p}, {p}};
      }
      case Regex::Kind::Star: {
        Info g = build(r.parts()[0]);
        for (int l : g.last) merge(follow[l], g.first);
        g.nullable = true;
        return g;
      }
      case Regex::Kind::Concat: {
        Info acc = build(r.parts()[0]);
        for (std::size_t i = 1; i < r.parts().size(); ++i) {
          Info g = build(r.parts()[i]);
          for (int l : acc.last) merge(follow[l], g.first);
          if (acc.nullable) merge(acc.first, g.first);
          if (g.nullable)
            merge(g.last, acc.last);
          acc.last = std::move(g.last);
          acc.nullable = acc.nullable && g.nullable;
        }
        return acc;
      }
      case Regex::Kind::Union: {
        Info acc{false, {}, {}};
        for (const Regex& p : r.parts()) {
          Info g = build(p);
          acc.nullable = acc.nullable || g.nullable;
          merge(acc.first, g.first);
          merge(acc.last, g.last);
        }
        return acc;
      }
    }
    return {false, {}, {}};
  }
};

}  // namespace

Regex parse_regex(std::string_view text) {
  detail::Scanner sc(text);
  Regex r = parse_union(sc);
  if (!sc.at_end()) sc.fail("unexpected input in regex");
  return r;
}

std::string to_string(const Regex& r) {
  std::string s;
  write(r, 0, s);
  return s;
}

Nfa regex_to_nfa(const Regex& r, const Alphabet& sigma) {
  Glushkov g{sigma, {}, {}};
  Glushkov::Info info = g.build(r);
  Nfa a(sigma, g.pos.size() + 1);
  a.add_initial(0);
  if (info.nullable) a.set_final(0);
  for (int p : info.first) a.add_transition(0, g.pos[p], static_cast<StateId>(p + 1));
  for (std::size_t p = 0; p < g.pos.size(); ++p)
    for (int q : g.follow[p]) a.add_transition(static_cast<StateId>(p + 1), g.pos[q], static_cast<StateId>(q + 1));
  for (int p : info.last) a.set_final(static_cast<StateId>(p + 1));
  return a;
}

}  // namespace xtc

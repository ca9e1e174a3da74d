#include "xtc/linarith.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "scan.hpp"
#include "xtc/error.hpp"

namespace xtc {

using boost::multiprecision::cpp_int;

// ---- terms

LinTerm LinTerm::var(const std::string& x, Rational c) {
  LinTerm t;
  if (c != 0) t.coeffs_[x] = std::move(c);
  return t;
}

Rational LinTerm::coefficient(const std::string& x) const {
  auto it = coeffs_.find(x);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

LinTerm& LinTerm::operator+=(const LinTerm& o) {
  for (const auto& [x, c] : o.coeffs_) {
    Rational& d = coeffs_[x];
    d += c;
    if (d == 0) coeffs_.erase(x);
  }
  constant_ += o.constant_;
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& o) { return *this += o * Rational(-1); }

LinTerm& LinTerm::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [x, c] : coeffs_) c *= k;
  constant_ *= k;
  return *this;
}

Rational LinTerm::eval(const Assignment& v) const {
  Rational s = constant_;
  for (const auto& [x, c] : coeffs_) {
    auto it = v.find(x);
    if (it == v.end()) throw UnboundVariable("variable '" + x + "' is not assigned");
    s += c * it->second;
  }
  return s;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

namespace {

std::string term_body(const LinTerm& t, bool with_constant) {
  std::string s;
  auto emit = [&](Rational c, const std::string& var) {
    bool neg = c < 0;
    if (neg) c = -c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (var.empty())
      s += to_string(c);
    else if (c == 1)
      s += var;
    else
      s += to_string(c) + "*" + var;
  };
  for (const auto& [x, c] : t.coefficients()) emit(c, x);
  if (with_constant && t.constant() != 0) emit(t.constant(), "");
  return s.empty() ? "0" : s;
}

const char* rel_text(Rel r) { return r == Rel::Lt ? "<" : r == Rel::Gt ? ">" : "="; }

bool holds(const Rational& v, Rel r) { return r == Rel::Lt ? v < 0 : r == Rel::Gt ? v > 0 : v == 0; }

Rel flip(Rel r) { return r == Rel::Lt ? Rel::Gt : r == Rel::Gt ? Rel::Lt : Rel::Eq; }

}  // namespace

std::string to_string(const LinTerm& t) { return term_body(t, true); }

// ---- formulas

Formula Formula::truth() {
  static const Formula t(std::make_shared<const Rep>(Rep{Kind::True, {}, {}}));
  return t;
}

Formula Formula::falsity() {
  static const Formula f(std::make_shared<const Rep>(Rep{Kind::False, {}, {}}));
  return f;
}

Formula Formula::atom(LinAtom a) {
  if (a.term.is_constant()) return holds(a.term.constant(), a.rel) ? truth() : falsity();
  return Formula(std::make_shared<const Rep>(Rep{Kind::Atom, std::move(a), {}}));
}

Formula Formula::compare(const LinTerm& lhs, std::string_view op, const LinTerm& rhs) {
  LinTerm t = lhs - rhs;
  if (op == "<") return atom({t, Rel::Lt});
  if (op == ">") return atom({t, Rel::Gt});
  if (op == "=") return atom({t, Rel::Eq});
  if (op == "<=") return negate(atom({t, Rel::Gt}));
  if (op == ">=") return negate(atom({t, Rel::Lt}));
  throw SyntaxError("unknown relation '" + std::string(op) + "'");
}

Formula Formula::negate(Formula f) {
  if (f.kind() == Kind::True) return falsity();
  if (f.kind() == Kind::False) return truth();
  if (f.kind() == Kind::Not) return f.parts()[0];
  return Formula(std::make_shared<const Rep>(Rep{Kind::Not, {}, {std::move(f)}}));
}

Formula Formula::conj(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (Formula& f : fs) {
    if (f.kind() == Kind::False) return falsity();
    if (f.kind() == Kind::True) continue;
    if (f.kind() == Kind::And)
      flat.insert(flat.end(), f.parts().begin(), f.parts().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat[0];
  return Formula(std::make_shared<const Rep>(Rep{Kind::And, {}, std::move(flat)}));
}

Formula Formula::disj(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (Formula& f : fs) {
    if (f.kind() == Kind::True) return truth();
    if (f.kind() == Kind::False) continue;
    if (f.kind() == Kind::Or)
      flat.insert(flat.end(), f.parts().begin(), f.parts().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat[0];
  return Formula(std::make_shared<const Rep>(Rep{Kind::Or, {}, std::move(flat)}));
}

Formula operator!(const Formula& f) { return Formula::negate(f); }
Formula operator&&(const Formula& a, const Formula& b) { return Formula::conj({a, b}); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disj({a, b}); }

bool eval(const Formula& f, const Assignment& v) {
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: return holds(f.atom().term.eval(v), f.atom().rel);
    case Formula::Kind::Not: return !eval(f.parts()[0], v);
    case Formula::Kind::And:
      for (const auto& g : f.parts())
        if (!eval(g, v)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& g : f.parts())
        if (eval(g, v)) return true;
      return false;
  }
  return false;
}

bool eval(const Formula& f, const IntAssignment& v) {
  Assignment a;
  for (const auto& [x, n] : v) a[x] = Rational(n);
  return eval(f, a);
}

namespace {

void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Atom)
    for (const auto& [x, c] : f.atom().term.coefficients()) out.insert(x);
  for (const auto& g : f.parts()) collect_vars(g, out);
}

void collect_atoms(const Formula& f, std::vector<LinAtom>& out) {
  if (f.kind() == Formula::Kind::Atom) out.push_back(f.atom());
  for (const auto& g : f.parts()) collect_atoms(g, out);
}

Formula map_atoms(const Formula& f, const std::function<Formula(const LinAtom&)>& fn) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Atom: return fn(f.atom());
    case Formula::Kind::Not: return Formula::negate(map_atoms(f.parts()[0], fn));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ps;
      for (const auto& g : f.parts()) ps.push_back(map_atoms(g, fn));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ps)) : Formula::disj(std::move(ps));
    }
  }
  return f;
}

// ---- parser

LinTerm parse_monomial(detail::Scanner& sc) {
  if (sc.at_ident()) return LinTerm::var(sc.ident());
  Rational c(cpp_int(sc.digits()));
  if (sc.accept('/')) {
    cpp_int d(sc.digits());
    if (d == 0) sc.fail("division by zero");
    c /= Rational(d);
  }
  if (sc.accept('*')) return LinTerm::var(sc.ident(), c);
  if (sc.at_ident()) return LinTerm::var(sc.ident(), c);
  return LinTerm(c);
}

LinTerm parse_term(detail::Scanner& sc) {
  bool neg = sc.accept('-');
  LinTerm t = parse_monomial(sc);
  if (neg) t *= Rational(-1);
  while (true) {
    if (sc.peek() == '+') {
      sc.accept('+');
      t += parse_monomial(sc);
    } else if (sc.peek() == '-' && sc.peek_raw(1) != '>') {
      sc.accept('-');
      t -= parse_monomial(sc);
    } else {
      return t;
    }
  }
}

Formula parse_or(detail::Scanner& sc);

Formula parse_unary(detail::Scanner& sc) {
  if (sc.accept('!')) return Formula::negate(parse_unary(sc));
  if (sc.accept('(')) {
    Formula f = parse_or(sc);
    sc.expect(')');
    return f;
  }
  if (sc.at_ident()) {
    std::string_view r = sc.rest();
    std::size_t n = 0;
    while (n < r.size() && detail::ident_char(r[n])) ++n;
    if (r.substr(0, n) == "true" || r.substr(0, n) == "false") {
      bool t = sc.ident() == "true";
      return t ? Formula::truth() : Formula::falsity();
    }
  }
  LinTerm lhs = parse_term(sc);
  std::string op;
  for (const char* cand : {"<=", ">=", "<", ">", "="})
    if (sc.accept(std::string_view(cand))) {
      op = cand;
      break;
    }
  if (op.empty()) sc.fail("expected relation");
  LinTerm rhs = parse_term(sc);
  return Formula::compare(lhs, op, rhs);
}

Formula parse_and(detail::Scanner& sc) {
  std::vector<Formula> fs{parse_unary(sc)};
  while (sc.accept('&')) fs.push_back(parse_unary(sc));
  return Formula::conj(std::move(fs));
}

Formula parse_or(detail::Scanner& sc) {
  std::vector<Formula> fs{parse_and(sc)};
  while (sc.accept('|')) fs.push_back(parse_and(sc));
  return Formula::disj(std::move(fs));
}

void write(const Formula& f, int ctx, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::True: out += "true"; return;
    case Formula::Kind::False: out += "false"; return;
    case Formula::Kind::Atom: {
      const LinTerm& t = f.atom().term;
      out += term_body(t, false);
      out += ' ';
      out += rel_text(f.atom().rel);
      out += ' ';
      out += to_string(Rational(-t.constant()));
      return;
    }
    case Formula::Kind::Not:
      out += "!(";
      write(f.parts()[0], 0, out);
      out += ')';
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = f.kind() == Formula::Kind::And;
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

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> s;
  collect_vars(f, s);
  return s;
}

std::vector<LinAtom> atoms(const Formula& f) {
  std::vector<LinAtom> out;
  collect_atoms(f, out);
  return out;
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& g : f.parts()) n += formula_size(g);
  return n;
}

Formula parse_formula(std::string_view text) {
  detail::Scanner sc(text);
  Formula f = parse_or(sc);
  if (!sc.at_end()) sc.fail("unexpected input in formula");
  return f;
}

std::string to_string(const Formula& f) {
  std::string s;
  write(f, 0, s);
  return s;
}

// ---- quantifier elimination

namespace {

struct Solved {
  bool has_x;
  LinTerm theta;  // x rel theta when has_x
  Rel rel;
};

Solved solve_for(const LinAtom& a, const std::string& x) {
  Rational c = a.term.coefficient(x);
  if (c == 0) return {false, {}, a.rel};
  // c*x + r rel 0  <=>  x rel' -r/c
  LinTerm r = a.term - LinTerm::var(x, c);
  r *= Rational(-1) / c;
  return {true, r, c > 0 ? a.rel : flip(a.rel)};
}

LinTerm substitute(const LinTerm& t, const std::string& x, const LinTerm& value) {
  Rational c = t.coefficient(x);
  if (c == 0) return t;
  return (t - LinTerm::var(x, c)) + value * c;
}

}  // namespace

Formula qe_eliminate(const Formula& f, const std::string& x) {
  std::vector<LinTerm> us;
  for (const LinAtom& a : atoms(f)) {
    Solved s = solve_for(a, x);
    if (s.has_x && std::find(us.begin(), us.end(), s.theta) == us.end()) us.push_back(s.theta);
  }
  auto at_infinity = [&](bool plus) {
    return map_atoms(f, [&](const LinAtom& a) {
      Solved s = solve_for(a, x);
      if (!s.has_x) return Formula::atom(a);
      if (s.rel == Rel::Eq) return Formula::falsity();
      bool lt = s.rel == Rel::Lt;
      return (plus ? !lt : lt) ? Formula::truth() : Formula::falsity();
    });
  };
  std::vector<Formula> ds{at_infinity(false), at_infinity(true)};
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = i; j < us.size(); ++j) {
      LinTerm mid = (us[i] + us[j]) * Rational(1, 2);
      ds.push_back(map_atoms(f, [&](const LinAtom& a) {
        return Formula::atom({substitute(a.term, x, mid), a.rel});
      }));
    }
  return Formula::disj(std::move(ds));
}

Formula qe_eliminate_last(const Formula& f) {
  auto vs = variables(f);
  if (vs.empty()) return f;
  return qe_eliminate(f, *vs.rbegin());
}

namespace {

// Dense compiled form: a fixed Boolean skeleton over a vector of atoms. The search only
// rewrites atoms, so the skeleton is shared by every branch.
struct DenseAtom {
  std::vector<Rational> a;  // one per variable
  Rational c;
  Rel rel;
  int fixed = -1;  // -1 free, 0 false, 1 true
};

struct SkelNode {
  Formula::Kind kind;
  int atom = -1;
  std::vector<int> kids;
};

class Compiled {
 public:
  explicit Compiled(const Formula& f) {
    auto vs = variables(f);
    vars_.assign(vs.begin(), vs.end());
    for (std::size_t i = 0; i < vars_.size(); ++i) index_[vars_[i]] = i;
    root_ = build(f);
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<DenseAtom>& atoms() const { return atoms_; }

  // 0 false, 1 true, 2 unknown
  int eval3(const std::vector<DenseAtom>& as) const { return eval3(root_, as); }

  std::optional<std::vector<Rational>> solve(const std::vector<DenseAtom>& as, std::size_t m) const {
    int t = eval3(as);
    if (t == 0) return std::nullopt;
    if (t == 1) return std::vector<Rational>(m, Rational(0));
    if (m == 0) return std::nullopt;  // unreachable: ground atoms are decided
    const std::size_t x = m - 1;
    struct Bound {
      std::vector<Rational> a;  // over vars 0..x-1
      Rational c;
      bool operator==(const Bound& o) const { return a == o.a && c == o.c; }
    };
    std::vector<Bound> us;
    std::vector<int> theta_of(as.size(), -1);
    std::vector<Rel> rel_of(as.size(), Rel::Eq);
    for (std::size_t i = 0; i < as.size(); ++i) {
      const DenseAtom& d = as[i];
      if (d.fixed >= 0 || d.a[x] == 0) continue;
      Bound b;
      b.a.resize(x);
      Rational k = Rational(-1) / d.a[x];
      for (std::size_t j = 0; j < x; ++j) b.a[j] = d.a[j] * k;
      b.c = d.c * k;
      rel_of[i] = d.a[x] > 0 ? d.rel : flip(d.rel);
      auto it = std::find(us.begin(), us.end(), b);
      if (it == us.end()) {
        theta_of[i] = static_cast<int>(us.size());
        us.push_back(std::move(b));
      } else {
        theta_of[i] = static_cast<int>(it - us.begin());
      }
    }
    auto value_of = [&](const Bound& b, const std::vector<Rational>& r) {
      Rational s = b.c;
      for (std::size_t j = 0; j < x; ++j) s += b.a[j] * r[j];
      return s;
    };
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t j = i; j < us.size(); ++j) {
        Bound mid;
        mid.a.resize(x);
        for (std::size_t k = 0; k < x; ++k) mid.a[k] = (us[i].a[k] + us[j].a[k]) / 2;
        mid.c = (us[i].c + us[j].c) / 2;
        std::vector<DenseAtom> next = as;
        for (DenseAtom& d : next) {
          if (d.fixed >= 0 || d.a[x] == 0) continue;
          Rational ax = d.a[x];
          for (std::size_t k = 0; k < x; ++k) d.a[k] += ax * mid.a[k];
          d.c += ax * mid.c;
          d.a[x] = 0;
        }
        if (auto r = solve(next, x)) {
          r->push_back(value_of(mid, *r));
          return r;
        }
      }
    for (bool plus : {true, false}) {
      std::vector<DenseAtom> next = as;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (theta_of[i] < 0) continue;
        Rel r = rel_of[i];
        bool v = r == Rel::Eq ? false : (r == Rel::Lt) != plus;
        next[i].fixed = v ? 1 : 0;
      }
      if (auto r = solve(next, x)) {
        Rational vx = 0;
        if (!us.empty()) {
          vx = value_of(us[0], *r);
          for (const Bound& b : us) {
            Rational v = value_of(b, *r);
            vx = plus ? std::max(vx, v) : std::min(vx, v);
          }
          vx += plus ? 1 : -1;
        }
        r->push_back(vx);
        return r;
      }
    }
    return std::nullopt;
  }

 private:
  int build(const Formula& f) {
    SkelNode n{f.kind(), -1, {}};
    if (f.kind() == Formula::Kind::Atom) n.atom = intern(f.atom());
    for (const auto& g : f.parts()) n.kids.push_back(build(g));
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  }

  int intern(const LinAtom& la) {
    DenseAtom d;
    d.a.assign(vars_.size(), Rational(0));
    for (const auto& [x, c] : la.term.coefficients()) d.a[index_.at(x)] = c;
    d.c = la.term.constant();
    d.rel = la.rel;
    // canonical: first nonzero coefficient is 1
    for (const Rational& c : d.a) {
      if (c == 0) continue;
      Rational k = 1 / c;
      for (Rational& e : d.a) e *= k;
      d.c *= k;
      if (k < 0) d.rel = flip(d.rel);
      break;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].a == d.a && atoms_[i].c == d.c && atoms_[i].rel == d.rel) return static_cast<int>(i);
    atoms_.push_back(std::move(d));
    return static_cast<int>(atoms_.size() - 1);
  }

  static int atom_value(const DenseAtom& d) {
    if (d.fixed >= 0) return d.fixed;
    for (const Rational& c : d.a)
      if (c != 0) return 2;
    return holds(d.c, d.rel) ? 1 : 0;
  }

  int eval3(int n, const std::vector<DenseAtom>& as) const {
    const SkelNode& s = nodes_[n];
    switch (s.kind) {
      case Formula::Kind::True: return 1;
      case Formula::Kind::False: return 0;
      case Formula::Kind::Atom: return atom_value(as[s.atom]);
      case Formula::Kind::Not: {
        int v = eval3(s.kids[0], as);
        return v == 2 ? 2 : 1 - v;
      }
      case Formula::Kind::And: {
        int res = 1;
        for (int k : s.kids) {
          int v = eval3(k, as);
          if (v == 0) return 0;
          if (v == 2) res = 2;
        }
        return res;
      }
      case Formula::Kind::Or: {
        int res = 0;
        for (int k : s.kids) {
          int v = eval3(k, as);
          if (v == 1) return 1;
          if (v == 2) res = 2;
        }
        return res;
      }
    }
    return 2;
  }

  std::vector<std::string> vars_;
  std::map<std::string, std::size_t> index_;
  std::vector<DenseAtom> atoms_;
  std::vector<SkelNode> nodes_;
  int root_ = -1;
};

}  // namespace

std::optional<Assignment> rational_satisfiable(const Formula& f) {
  Compiled c(f);
  auto r = c.solve(c.atoms(), c.vars().size());
  if (!r) return std::nullopt;
  Assignment out;
  for (std::size_t i = 0; i < c.vars().size(); ++i) out[c.vars()[i]] = (*r)[i];
  return out;
}

// ---- integer search

std::optional<IntAssignment> integer_feasible_box(const Formula& f, const Box& box, std::uint64_t cap) {
  for (const std::string& x : variables(f))
    if (!box.count(x)) throw UnboundVariable("variable '" + x + "' has no box range");
  std::vector<std::string> vars;
  std::vector<IntRange> ranges;
  double cells = 1;
  for (const auto& [x, r] : box) {
    if (r.lo > r.hi) return std::nullopt;
    vars.push_back(x);
    ranges.push_back(r);
    cells *= double(r.hi - r.lo + 1);
  }
  if (cells > double(cap)) throw BoxTooLarge("box has " + std::to_string(cells) + " cells");
  std::vector<std::int64_t> cur;
  for (const IntRange& r : ranges) cur.push_back(r.lo);
  Assignment a;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = Rational(cur[i]);
    if (eval(f, a)) {
      IntAssignment out;
      for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = cur[i];
      return out;
    }
    std::size_t i = vars.size();
    while (i > 0 && cur[i - 1] == ranges[i - 1].hi) {
      --i;
      cur[i] = ranges[i].lo;
    }
    if (i == 0) return std::nullopt;
    ++cur[i - 1];
  }
}

Formula CountingSystem::phi1() const {
  std::vector<Formula> fs;
  for (const auto& [x, v] : fixed) fs.push_back(Formula::compare(LinTerm::var(x), "=", LinTerm(Rational(v))));
  for (const auto& [x, k] : above) fs.push_back(Formula::compare(LinTerm::var(x), ">", LinTerm(Rational(k))));
  return Formula::conj(std::move(fs));
}

std::optional<IntAssignment> counting_feasible(const CountingSystem& s, std::uint64_t k_in,
                                               std::uint64_t i_out_max) {
  Box box;
  const std::int64_t hi = static_cast<std::int64_t>(std::max(k_in, i_out_max) + 1);
  for (const std::string& x : s.vars) {
    if (auto it = s.fixed.find(x); it != s.fixed.end()) {
      std::int64_t v = static_cast<std::int64_t>(it->second);
      box[x] = {v, v};
    } else {
      std::int64_t lo = static_cast<std::int64_t>(k_in) + 1;
      if (auto a = s.above.find(x); a != s.above.end()) lo = static_cast<std::int64_t>(a->second) + 1;
      box[x] = {lo, std::max(lo, hi)};
    }
  }
  for (const std::string& x : variables(s.phi2))
    if (!box.count(x)) box[x] = {0, 0};
  return integer_feasible_box(s.target(), box);
}

namespace {

// Fourier–Motzkin projection of a conjunction of a·x + c (< | <= | =) 0 onto one variable.
struct Constraint {
  std::vector<Rational> a;
  Rational c;
  int kind;  // 0: <, 1: <=, 2: =
};

struct Interval {
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;
  bool empty = false;
};

Interval project(std::vector<Constraint> cs, std::size_t keep, std::size_t n) {
  Interval out;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == keep) continue;
    auto eq = std::find_if(cs.begin(), cs.end(), [&](const Constraint& k) { return k.kind == 2 && k.a[v] != 0; });
    std::vector<Constraint> next;
    if (eq != cs.end()) {
      Constraint e = *eq;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (&cs[i] == &*eq) continue;
        Constraint k = cs[i];
        if (k.a[v] != 0) {
          Rational f = k.a[v] / e.a[v];
          for (std::size_t j = 0; j < n; ++j) k.a[j] -= f * e.a[j];
          k.c -= f * e.c;
        }
        next.push_back(std::move(k));
      }
    } else {
      std::vector<const Constraint*> pos, neg;
      for (const Constraint& k : cs) {
        if (k.a[v] > 0)
          pos.push_back(&k);
        else if (k.a[v] < 0)
          neg.push_back(&k);
        else
          next.push_back(k);
      }
      for (const Constraint* p : pos)
        for (const Constraint* q : neg) {
          Constraint k;
          Rational fp = 1 / p->a[v], fq = -1 / q->a[v];
          k.a.resize(n);
          for (std::size_t j = 0; j < n; ++j) k.a[j] = p->a[j] * fp + q->a[j] * fq;
          k.a[v] = 0;
          k.c = p->c * fp + q->c * fq;
          k.kind = (p->kind == 0 || q->kind == 0) ? 0 : 1;
          next.push_back(std::move(k));
        }
    }
    // drop ground constraints, detect infeasibility, dedupe
    cs.clear();
    for (Constraint& k : next) {
      bool ground = std::all_of(k.a.begin(), k.a.end(), [](const Rational& r) { return r == 0; });
      if (ground) {
        bool ok = k.kind == 0 ? k.c < 0 : k.kind == 1 ? k.c <= 0 : k.c == 0;
        if (!ok) {
          out.empty = true;
          return out;
        }
        continue;
      }
      bool dup = std::any_of(cs.begin(), cs.end(), [&](const Constraint& o) {
        return o.kind == k.kind && o.a == k.a && o.c == k.c;
      });
      if (!dup) cs.push_back(std::move(k));
    }
  }
  for (const Constraint& k : cs) {
    const Rational& a = k.a[keep];
    if (a == 0) continue;
    Rational b = -k.c / a;  // a·x + c ~ 0
    bool strict = k.kind == 0;
    auto upper = [&] {
      if (!out.hi || b < *out.hi || (b == *out.hi && strict)) out.hi = b, out.hi_strict = strict;
    };
    auto lower = [&] {
      if (!out.lo || b > *out.lo || (b == *out.lo && strict)) out.lo = b, out.lo_strict = strict;
    };
    if (k.kind == 2) {
      upper();
      lower();
    } else if (a > 0) {
      upper();
    } else {
      lower();
    }
  }
  return out;
}

std::int64_t floor_of(const Rational& r) {
  cpp_int q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) q -= 1;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_of(const Rational& r) { return -floor_of(-r); }

}  // namespace

IntResult integer_feasible_cells(const Formula& f, const CellOptions& opts) {
  IntResult res;
  auto vs = variables(f);
  std::vector<std::string> vars(vs.begin(), vs.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  // distinct hyperplanes of f
  std::vector<LinTerm> planes;
  for (const LinAtom& a : atoms(f)) {
    LinTerm t = a.term;
    Rational lead = t.coefficients().begin()->second;
    t *= 1 / (lead < 0 ? -lead : lead);
    if (std::find(planes.begin(), planes.end(), t) == planes.end()) planes.push_back(t);
  }
  Formula current = f;
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    auto w = rational_satisfiable(current);
    if (!w) {
      res.status = Feasibility::Infeasible;
      return res;
    }
    for (const std::string& x : vars) w->emplace(x, 0);
    // step 2: the cell of the witness w.r.t. every hyperplane
    std::vector<Formula> sides;
    std::vector<Constraint> cs;
    for (const LinTerm& t : planes) {
      Rational v = t.eval(*w);
      Rel r = v < 0 ? Rel::Lt : v > 0 ? Rel::Gt : Rel::Eq;
      sides.push_back(Formula::atom({t, r}));
      Constraint k;
      k.a.assign(vars.size(), Rational(0));
      for (const auto& [x, c] : t.coefficients()) k.a[index[x]] = c;
      k.c = t.constant();
      k.kind = r == Rel::Eq ? 2 : 0;
      if (r == Rel::Gt) {
        for (Rational& e : k.a) e = -e;
        k.c = -k.c;
      }
      cs.push_back(std::move(k));
    }
    Formula cell = Formula::conj(sides);
    // step 3: integer point inside the cell, searched over the cell's bounding box.
    // Unbounded sides get a window around the witness that doubles until the cap.
    std::vector<Interval> ivs;
    bool exact = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      ivs.push_back(project(cs, i, vars.size()));
      exact = exact && ivs.back().lo && ivs.back().hi;
    }
    std::optional<IntAssignment> hit;
    bool capped = false;
    for (std::int64_t radius = 1;; radius *= 2) {
      radius = std::min(radius, opts.bound_search_limit);
      Box box;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const Interval& iv = ivs[i];
        const Rational& wv = (*w)[vars[i]];
        std::int64_t lo = iv.lo ? (iv.lo_strict ? floor_of(*iv.lo) + 1 : ceil_of(*iv.lo)) : floor_of(wv) - radius;
        std::int64_t hi = iv.hi ? (iv.hi_strict ? ceil_of(*iv.hi) - 1 : floor_of(*iv.hi)) : ceil_of(wv) + radius;
        box[vars[i]] = {lo, hi};
      }
      try {
        hit = integer_feasible_box(cell, box, opts.box_cap);
      } catch (const BoxTooLarge&) {
        capped = true;
      }
      if (hit || capped || exact || radius >= opts.bound_search_limit) break;
    }
    if (hit) {
      res.status = Feasibility::Feasible;
      res.witness = *hit;
      return res;
    }
    if (capped) {
      res.status = Feasibility::Unknown;
      res.note = exact ? "cell bounding box exceeds search cap" : "cell unbounded; box around witness exceeds search cap";
      return res;
    }
    if (!exact) {
      res.status = Feasibility::Unknown;
      res.note = "cell unbounded and no integer point within search radius";
      return res;
    }
    // step 5: exclude the cell and continue
    current = current && !cell;
  }
  res.status = Feasibility::Unknown;
  res.note = "iteration limit reached";
  return res;
}

IntResult positive_integer_feasible(const Formula& f, const CellOptions& opts) {
  std::vector<Formula> fs{f};
  for (const std::string& x : variables(f)) fs.push_back(Formula::compare(LinTerm::var(x), ">=", LinTerm()));
  return integer_feasible_cells(Formula::conj(std::move(fs)), opts);
}

}  // namespace xtc

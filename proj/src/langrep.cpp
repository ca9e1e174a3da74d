#include "xtc/error.hpp"
#include "xtc/strlang.hpp"

namespace xtc {

namespace {

Regex drop_symbols(const Regex& r, const Alphabet& sigma, const SymbolMask& alive) {
  switch (r.kind()) {
    case Regex::Kind::Empty:
    case Regex::Kind::Epsilon: return r;
    case Regex::Kind::Symbol: {
      auto id = sigma.find(r.name());
      return id && alive[*id] ? r : Regex::empty();
    }
    case Regex::Kind::Star: {
      Regex inner = drop_symbols(r.parts()[0], sigma, alive);
      if (inner.kind() == Regex::Kind::Empty || inner.kind() == Regex::Kind::Epsilon) return Regex::epsilon();
      return Regex::star(inner);
    }
    case Regex::Kind::Concat: {
      std::vector<Regex> ps;
      for (const Regex& p : r.parts()) {
        Regex q = drop_symbols(p, sigma, alive);
        if (q.kind() == Regex::Kind::Empty) return Regex::empty();
        if (q.kind() != Regex::Kind::Epsilon) ps.push_back(q);
      }
      return Regex::concat(std::move(ps));
    }
    case Regex::Kind::Union: {
      std::vector<Regex> ps;
      for (const Regex& p : r.parts()) {
        Regex q = drop_symbols(p, sigma, alive);
        if (q.kind() != Regex::Kind::Empty) ps.push_back(q);
      }
      return Regex::alt(std::move(ps));
    }
  }
  return r;
}

// Atoms on a removed symbol c: c=0 / c>=0 become true, anything with i > 0 becomes false.
SlFormula drop_symbols(const SlFormula& f, const Alphabet& sigma, const SymbolMask& alive) {
  switch (f.kind()) {
    case SlFormula::Kind::True: return f;
    case SlFormula::Kind::Eq:
    case SlFormula::Kind::Ge: {
      auto id = sigma.find(f.symbol());
      if (id && alive[*id]) return f;
      return f.count() == 0 ? SlFormula::truth() : SlFormula::falsity();
    }
    case SlFormula::Kind::Not: return SlFormula::negate(drop_symbols(f.parts()[0], sigma, alive));
    case SlFormula::Kind::And:
    case SlFormula::Kind::Or: {
      std::vector<SlFormula> ps;
      for (const auto& g : f.parts()) ps.push_back(drop_symbols(g, sigma, alive));
      return f.kind() == SlFormula::Kind::And ? SlFormula::conj(std::move(ps)) : SlFormula::disj(std::move(ps));
    }
  }
  return f;
}

SymbolWord word_from_counts(const Alphabet& sigma, const ParikhVector& v) {
  SymbolWord w;
  for (SymbolId c = 0; c < sigma.size(); ++c) {
    auto it = v.find(sigma.symbol(c));
    if (it == v.end()) continue;
    for (std::uint64_t i = 0; i < it->second; ++i) w.push_back(c);
  }
  return w;
}

std::set<Label> allowed_set(const Alphabet& sigma, const SymbolMask* allowed) {
  std::set<Label> s;
  for (SymbolId c = 0; c < sigma.size(); ++c)
    if (!allowed || (*allowed)[c]) s.insert(sigma.symbol(c));
  return s;
}

}  // namespace

LangRep LangRep::from_dfa(Dfa d) {
  LangRep m;
  m.kind_ = Kind::Dfa;
  m.alphabet_ = std::make_shared<const Alphabet>(d.alphabet());
  m.nfa_ = std::make_shared<const Nfa>(d.to_nfa());
  m.dfa_ = std::make_shared<const Dfa>(std::move(d));
  return m;
}

LangRep LangRep::from_nfa(Nfa n) {
  LangRep m;
  m.kind_ = Kind::Nfa;
  m.alphabet_ = std::make_shared<const Alphabet>(n.alphabet());
  m.nfa_ = std::make_shared<const Nfa>(std::move(n));
  return m;
}

LangRep LangRep::from_regex(Regex r, const Alphabet& sigma) {
  LangRep m;
  m.kind_ = Kind::Regex;
  m.alphabet_ = std::make_shared<const Alphabet>(sigma);
  m.nfa_ = std::make_shared<const Nfa>(regex_to_nfa(r, sigma));
  m.regex_ = std::make_shared<const Regex>(std::move(r));
  return m;
}

LangRep LangRep::from_sl(SlFormula f, const Alphabet& sigma) {
  for (const Label& a : sl_symbols(f))
    if (!sigma.contains(a)) throw UnknownSymbol("unknown symbol '" + a + "' in SL formula");
  LangRep m;
  m.kind_ = Kind::Sl;
  m.alphabet_ = std::make_shared<const Alphabet>(sigma);
  m.sl_ = std::make_shared<const SlFormula>(std::move(f));
  return m;
}

LangRep LangRep::empty_language(const Alphabet& sigma) { return from_regex(Regex::empty(), sigma); }

const Alphabet& LangRep::alphabet() const { return *alphabet_; }

const Nfa& LangRep::nfa() const {
  if (!nfa_) throw NotApplicable("SL content model has no NFA form");
  return *nfa_;
}

const Dfa& LangRep::dfa() const {
  if (!dfa_) throw NotApplicable("content model is not a DFA");
  return *dfa_;
}

const Regex& LangRep::regex() const {
  if (!regex_) throw NotApplicable("content model is not a regex");
  return *regex_;
}

const SlFormula& LangRep::sl() const {
  if (!sl_) throw NotApplicable("content model is not an SL formula");
  return *sl_;
}

bool LangRep::accepts(std::span<const SymbolId> w) const {
  if (dfa_) return dfa_->accepts(w);
  if (nfa_) return nfa_accepts(*nfa_, w);
  ParikhVector v;
  for (SymbolId c : w) ++v[alphabet_->symbol(c)];
  return sl_eval(*sl_, v);
}

bool LangRep::accepts(const Word& w) const { return accepts(to_symbols(*alphabet_, w)); }

Dfa LangRep::to_dfa(std::size_t cap) const {
  if (dfa_) return *dfa_;
  if (nfa_) return determinize(*nfa_, cap);
  return sl_to_dfa(*sl_, *alphabet_, cap);
}

std::optional<SymbolWord> LangRep::witness(const SymbolMask* allowed) const {
  if (nfa_) return shortest_word(*nfa_, allowed);
  auto v = sl_sat(*sl_, allowed_set(*alphabet_, allowed));
  if (!v) return std::nullopt;
  return word_from_counts(*alphabet_, *v);
}

std::optional<SymbolWord> LangRep::witness_containing(SymbolId c, const SymbolMask* allowed) const {
  if (nfa_) return shortest_word_containing(*nfa_, c, allowed);
  if (allowed && !(*allowed)[c]) return std::nullopt;
  SlFormula g = SlFormula::conj({*sl_, SlFormula::ge(alphabet_->symbol(c), 1)});
  auto v = sl_sat(g, allowed_set(*alphabet_, allowed));
  if (!v) return std::nullopt;
  return word_from_counts(*alphabet_, *v);
}

LangRep LangRep::restrict_to(const SymbolMask& alive) const {
  const Alphabet& sigma = *alphabet_;
  switch (kind_) {
    case Kind::Dfa: {
      Dfa d(sigma, dfa_->num_states(), dfa_->initial());
      for (StateId q = 0; q < dfa_->num_states(); ++q) {
        d.set_final(q, dfa_->is_final(q));
        for (SymbolId c = 0; c < sigma.size(); ++c)
          if (alive[c]) d.set_transition(q, c, dfa_->next(q, c));
      }
      return from_dfa(std::move(d));
    }
    case Kind::Nfa: {
      Nfa n(sigma, nfa_->num_states());
      for (StateId q : nfa_->initial()) n.add_initial(q);
      for (StateId q = 0; q < nfa_->num_states(); ++q) {
        n.set_final(q, nfa_->is_final(q));
        for (SymbolId c = 0; c < sigma.size(); ++c)
          if (alive[c])
            for (StateId p : nfa_->successors(q, c)) n.add_transition(q, c, p);
      }
      return from_nfa(std::move(n));
    }
    case Kind::Regex: return from_regex(drop_symbols(*regex_, sigma, alive), sigma);
    case Kind::Sl: return from_sl(drop_symbols(*sl_, sigma, alive), sigma);
  }
  return *this;
}

std::string LangRep::to_text() const {
  switch (kind_) {
    case Kind::Dfa: return "dfa: " + automaton_literal(*nfa_);
    case Kind::Nfa: return "nfa: " + automaton_literal(*nfa_);
    case Kind::Regex: return "regex: " + to_string(*regex_);
    case Kind::Sl: return "sl: " + to_string(*sl_);
  }
  return {};
}

bool symbol_occurs(const LangRep& m, const Label& a) {
  auto id = m.alphabet().find(a);
  if (!id) return false;
  return m.witness_containing(*id).has_value();
}

}  // namespace xtc

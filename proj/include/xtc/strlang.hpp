#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xtc/tree.hpp"

namespace xtc {

using SymbolId = std::uint32_t;
using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 16;

using Word = std::vector<Label>;
using SymbolWord = std::vector<SymbolId>;
using SymbolMask = std::vector<bool>;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Label> symbols);

  std::size_t size() const { return symbols_.size(); }
  const Label& symbol(SymbolId i) const { return symbols_.at(i); }
  const std::vector<Label>& symbols() const { return symbols_; }
  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId id(std::string_view name) const;  // throws UnknownSymbol
  bool contains(std::string_view name) const { return find(name).has_value(); }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<Label> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

SymbolWord to_symbols(const Alphabet& sigma, const Word& w);
Word to_word(const Alphabet& sigma, const SymbolWord& w);

class Nfa {
 public:
  Nfa() = default;
  Nfa(Alphabet alphabet, std::size_t num_states);

  StateId add_state();
  void add_transition(StateId from, SymbolId a, StateId to);
  void add_initial(StateId q);
  void set_final(StateId q, bool f = true);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return final_.size(); }
  const std::vector<StateId>& initial() const { return initial_; }
  bool is_final(StateId q) const { return final_.at(q); }
  const std::vector<StateId>& successors(StateId q, SymbolId a) const { return delta_[q][a]; }
  bool is_deterministic() const;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<std::vector<StateId>>> delta_;
  std::vector<StateId> initial_;
  std::vector<bool> final_;
};

// Partial DFA: missing transitions read as kNoState (implicit rejecting sink).
class Dfa {
 public:
  Dfa() = default;
  Dfa(Alphabet alphabet, std::size_t num_states, StateId initial = 0);

  StateId add_state();
  void set_transition(StateId from, SymbolId a, StateId to);
  void set_final(StateId q, bool f = true);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return final_.size(); }
  StateId initial() const { return initial_; }
  bool is_final(StateId q) const { return q != kNoState && final_[q]; }
  StateId next(StateId q, SymbolId a) const {
    return q == kNoState ? kNoState : table_[std::size_t(q) * alphabet_.size() + a];
  }
  StateId run(StateId from, std::span<const SymbolId> w) const;
  bool accepts(std::span<const SymbolId> w) const { return is_final(run(initial_, w)); }

  bool is_complete() const;
  Dfa completed() const;
  Dfa complemented() const;
  Nfa to_nfa() const;

 private:
  Alphabet alphabet_;
  std::vector<StateId> table_;
  std::vector<bool> final_;
  StateId initial_ = 0;
};

Dfa nfa_as_dfa(const Nfa& a);  // throws SemanticError if a is not deterministic

class Regex {
 public:
  enum class Kind { Empty, Epsilon, Symbol, Concat, Union, Star };

  static Regex empty();
  static Regex epsilon();
  static Regex symbol(Label a);
  static Regex concat(std::vector<Regex> parts);
  static Regex alt(std::vector<Regex> parts);
  static Regex star(Regex r);

  Kind kind() const { return rep_->kind; }
  const Label& name() const { return rep_->name; }
  const std::vector<Regex>& parts() const { return rep_->parts; }
  std::size_t size() const;

 private:
  struct Rep {
    Kind kind;
    Label name;
    std::vector<Regex> parts;
  };
  explicit Regex(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

Regex parse_regex(std::string_view text);
std::string to_string(const Regex& r);
Nfa regex_to_nfa(const Regex& r, const Alphabet& sigma);

using ParikhVector = std::map<Label, std::uint64_t>;
ParikhVector parikh(const Word& w);

class SlFormula {
 public:
  enum class Kind { True, Eq, Ge, Not, And, Or };

  static SlFormula truth();
  static SlFormula falsity() { return negate(truth()); }
  static SlFormula eq(Label a, std::uint64_t i);
  static SlFormula ge(Label a, std::uint64_t i);
  static SlFormula negate(SlFormula f);
  static SlFormula conj(std::vector<SlFormula> fs);
  static SlFormula disj(std::vector<SlFormula> fs);

  Kind kind() const { return rep_->kind; }
  const Label& symbol() const { return rep_->symbol; }
  std::uint64_t count() const { return rep_->count; }
  const std::vector<SlFormula>& parts() const { return rep_->parts; }

 private:
  struct Rep {
    Kind kind;
    Label symbol;
    std::uint64_t count = 0;
    std::vector<SlFormula> parts;
  };
  explicit SlFormula(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

SlFormula parse_sl(std::string_view text, const Alphabet& sigma);
std::string to_string(const SlFormula& f);
bool sl_eval(const SlFormula& f, const ParikhVector& v);
std::uint64_t sl_max_int(const SlFormula& f);
std::set<Label> sl_symbols(const SlFormula& f);
// Box search over {0..k+1} for the allowed symbols mentioned in f; other symbols stay 0.
std::optional<ParikhVector> sl_sat(const SlFormula& f, const std::set<Label>& allowed);
// Counting automaton with counts capped at k+1.
Dfa sl_to_dfa(const SlFormula& f, const Alphabet& sigma, std::size_t cap = kDefaultStateCap);

struct EmptinessResult {
  bool empty = true;
  Word witness;
};

struct UniversalityResult {
  bool universal = true;
  Word counterexample;
};

bool nfa_accepts(const Nfa& a, std::span<const SymbolId> w);
bool nfa_membership(const Nfa& a, const Word& w);
EmptinessResult nfa_empty(const Nfa& a);
std::optional<SymbolWord> shortest_word(const Nfa& a, const SymbolMask* allowed = nullptr);
std::optional<SymbolWord> shortest_word_containing(const Nfa& a, SymbolId c,
                                                   const SymbolMask* allowed = nullptr);
Dfa determinize(const Nfa& a, std::size_t cap = kDefaultStateCap);
UniversalityResult nfa_universal(const Nfa& a, std::size_t cap = kDefaultStateCap);
EmptinessResult dfa_intersection_empty(std::span<const Dfa> dfas);
// Longest accepted word length, nullopt if L is infinite. -1 if L is empty.
std::optional<long> max_word_length(const Nfa& a);

// Automaton literal: {states 3; init 0; final 2; 0 a 1; 1 b 2}
Nfa parse_automaton(std::string_view text, const Alphabet& sigma);
std::string automaton_literal(const Nfa& a);

class LangRep {
 public:
  enum class Kind { Dfa, Nfa, Regex, Sl };

  static LangRep from_dfa(Dfa d);
  static LangRep from_nfa(Nfa n);
  static LangRep from_regex(Regex r, const Alphabet& sigma);
  static LangRep from_sl(SlFormula f, const Alphabet& sigma);
  static LangRep empty_language(const Alphabet& sigma);

  Kind kind() const { return kind_; }
  bool is_sl() const { return kind_ == Kind::Sl; }
  const Alphabet& alphabet() const;
  const Nfa& nfa() const;  // regular kinds only
  const Dfa& dfa() const;  // Dfa kind only
  const Regex& regex() const;
  const SlFormula& sl() const;

  bool accepts(std::span<const SymbolId> w) const;
  bool accepts(const Word& w) const;
  Dfa to_dfa(std::size_t cap = kDefaultStateCap) const;
  std::optional<SymbolWord> witness(const SymbolMask* allowed = nullptr) const;
  std::optional<SymbolWord> witness_containing(SymbolId c, const SymbolMask* allowed = nullptr) const;
  // Drops every symbol outside `alive`, keeping the representation kind.
  LangRep restrict_to(const SymbolMask& alive) const;
  std::string to_text() const;

 private:
  LangRep() = default;
  Kind kind_ = Kind::Regex;
  std::shared_ptr<const Alphabet> alphabet_;
  std::shared_ptr<const Nfa> nfa_;
  std::shared_ptr<const Dfa> dfa_;
  std::shared_ptr<const Regex> regex_;
  std::shared_ptr<const SlFormula> sl_;
};

bool symbol_occurs(const LangRep& m, const Label& a);

}  // namespace xtc

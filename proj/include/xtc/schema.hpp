#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xtc/strlang.hpp"
#include "xtc/tree.hpp"

namespace xtc {

struct Check {
  bool ok = true;
  NodeAddress at;
  std::string reason;
  explicit operator bool() const { return ok; }
};

// DTD(M): one content model per symbol, all over the DTD's own alphabet.
class Dtd {
 public:
  Dtd() = default;
  Dtd(Alphabet sigma, const Label& start);  // every content model starts as ∅

  void set_content(const Label& a, LangRep m);
  void set_start(const Label& a);

  const Alphabet& alphabet() const { return *alphabet_; }
  const Label& start() const { return alphabet_->symbol(start_); }
  SymbolId start_id() const { return start_; }
  const LangRep& content(SymbolId a) const { return content_.at(a); }
  const LangRep& content(const Label& a) const { return content_.at(alphabet_->id(a)); }
  std::size_t size() const { return content_.size(); }

  bool all_kind(LangRep::Kind k) const;
  bool any_sl() const;

 private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<LangRep> content_;
  SymbolId start_ = 0;
};

Check dtd_validate(const Dtd& d, const Tree& t);
Check dtd_partly_satisfies(const Dtd& d, const Hedge& h);

// Symbols a with L((d, a)) ≠ ∅, found layer by layer so witnesses have minimal depth.
struct Productivity {
  SymbolMask productive;
  std::vector<int> layer;  // -1 when unproductive
  std::vector<SymbolWord> word;  // children string of the witness root, over lower layers
};

Productivity productive_symbols(const Dtd& d);
std::optional<Node> symbol_witness(const Dtd& d, const Productivity& p, SymbolId a);

struct DtdEmptiness {
  bool empty = true;
  Tree witness;
};

DtdEmptiness dtd_empty(const Dtd& d);

// Keeps the alphabet; removed symbols get ∅ content and every reference to them is dropped.
Dtd dtd_reduce(const Dtd& d);  // throws EmptyLanguage
SymbolMask live_symbols(const Dtd& reduced);

// Unranked tree automaton; transition languages are over the state alphabet.
class NtAutomaton {
 public:
  NtAutomaton() = default;
  NtAutomaton(Alphabet states, Alphabet sigma);

  void set_transition(const Label& q, const Label& a, LangRep m);
  void set_final(const Label& q, bool f = true);

  const Alphabet& states() const { return *states_; }
  const Alphabet& alphabet() const { return *sigma_; }
  // nullptr when δ(q, a) = ∅
  const LangRep* transition(StateId q, SymbolId a) const;
  bool is_final(StateId q) const { return final_.at(q); }
  const SymbolMask& final_states() const { return final_; }

 private:
  std::shared_ptr<const Alphabet> states_;
  std::shared_ptr<const Alphabet> sigma_;
  std::map<std::pair<StateId, SymbolId>, LangRep> delta_;
  SymbolMask final_;
};

struct StateNode {
  Label state;
  std::vector<StateNode> children;
};

struct NtaRun {
  bool accepted = false;
  std::optional<StateNode> run;  // λ, present when accepted
};

NtaRun nta_membership(const NtAutomaton& b, const Tree& t);
// Per-node state sets in a bottom-up pass.
std::vector<StateId> nta_states_at(const NtAutomaton& b, const Node& n);
bool nta_run_valid(const NtAutomaton& b, const Node& t, const StateNode& run);

struct NtaEmptiness {
  bool empty = true;
  Tree witness;
};

NtaEmptiness nta_empty(const NtAutomaton& b);
NtaEmptiness nta_intersection_empty(const std::vector<NtAutomaton>& bs);
bool is_bottom_up_deterministic(const NtAutomaton& b, std::size_t cap = kDefaultStateCap);

// Binary top-down deterministic automaton with one start state.
class TdbtAutomaton {
 public:
  TdbtAutomaton() = default;
  TdbtAutomaton(std::vector<Label> states, std::vector<Label> internal, std::vector<Label> leaves,
                Label start);

  // rhs of length 1 or 2 for internal labels, empty for leaf labels
  void set_transition(const Label& q, const Label& a, std::vector<Label> rhs);

  const std::vector<Label>& states() const { return states_; }
  const std::vector<Label>& internal_labels() const { return internal_; }
  const std::vector<Label>& leaf_labels() const { return leaves_; }
  const Label& start() const { return start_; }
  const std::map<std::pair<Label, Label>, std::vector<Label>>& transitions() const { return delta_; }
  const std::vector<Label>* transition(const Label& q, const Label& a) const;
  bool is_leaf_label(const Label& a) const;
  bool is_internal_label(const Label& a) const;

 private:
  std::vector<Label> states_, internal_, leaves_;
  Label start_;
  std::map<std::pair<Label, Label>, std::vector<Label>> delta_;
};

std::vector<std::string> tdbta_validate(const TdbtAutomaton& a);
bool tdbta_membership(const TdbtAutomaton& a, const Tree& t);  // throws MalformedTree
NtAutomaton tdbta_to_nta(const TdbtAutomaton& a);

// All trees of L(d) with depth ≤ max_depth and at most max_width children per node.
// Per-depth lists are materialized; the total is capped.
class TreeEnumerator {
 public:
  TreeEnumerator(const Dtd& d, std::size_t max_depth, std::size_t max_width,
                 std::size_t cap = 200000);
  // Trees rooted at the start symbol, in order of increasing depth.
  const std::vector<Node>& trees();
  // True when every tree of L(d) has depth ≤ max_depth and width ≤ max_width.
  bool exhaustive() const { return exhaustive_; }

 private:
  std::vector<Node> level_for(SymbolId a, const std::vector<std::vector<Node>>& below);
  Dtd d_;
  std::size_t max_depth_, max_width_, cap_;
  std::vector<Node> roots_;
  bool built_ = false;
  bool exhaustive_ = false;
  std::size_t produced_ = 0;
};

}  // namespace xtc

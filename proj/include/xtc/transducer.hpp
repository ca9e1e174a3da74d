#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xtc/strlang.hpp"
#include "xtc/tree.hpp"

namespace xtc {

// Right-hand side node: a Σ-label or a state reference (always a leaf).
struct RhsNode {
  Label label;
  bool is_state = false;
  std::vector<RhsNode> children;
  friend bool operator==(const RhsNode&, const RhsNode&) = default;
};
using Rhs = std::vector<RhsNode>;

inline RhsNode state_ref(Label q) { return RhsNode{std::move(q), true, {}}; }

// `c($p d $q) e`, `$p`, or `eps` for the empty hedge.
Rhs parse_rhs(std::string_view text);
std::string to_string(const Rhs& h);

class Transducer {
 public:
  Transducer() = default;
  Transducer(std::vector<Label> states, Alphabet sigma, Label initial);

  // A second rule for the same (q, a) is a SemanticError.
  void add_rule(const Label& q, const Label& a, Rhs rhs);

  const std::vector<Label>& states() const { return states_; }
  const Alphabet& alphabet() const { return sigma_; }
  const Label& initial() const { return initial_; }
  bool has_state(const Label& q) const;
  const Rhs* rule(const Label& q, const Label& a) const;
  // sorted by (state, label)
  const std::map<std::pair<Label, Label>, Rhs>& rules() const { return rules_; }

 private:
  std::vector<Label> states_;
  Alphabet sigma_;
  Label initial_;
  std::map<std::pair<Label, Label>, Rhs> rules_;
};

enum class ViolationKind { StateNotLeaf, InitialRhsShape, UnknownState, UnknownLabel };

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string to_string(ViolationKind k);
std::vector<Violation> validate(const Transducer& t);

Hedge apply_state(const Transducer& t, const Label& q, const Node& input);
Hedge apply_state(const Transducer& t, const Label& q, const Tree& input);
Tree apply(const Transducer& t, const Tree& input);

// q_T[w]: top(T^q(a)) for each letter, concatenated.
Word state_image(const Transducer& t, const Label& q, const Word& w);

struct TransducerAnalysis {
  bool nondeleting = true;
  std::size_t copying_width = 0;
};

TransducerAnalysis analyze(const Transducer& t);

// (q, a) -> a($q) for every label.
Transducer identity_transducer(const Alphabet& sigma, const Label& q = "q");

}  // namespace xtc

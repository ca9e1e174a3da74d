#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xtc/schema.hpp"
#include "xtc/typecheck.hpp"

namespace xtc {

// Source automata of the string constructions range over this alphabet ("0", "1").
Alphabet binary_alphabet();  // {b0, b1}
// TDBTA labels: internal b0 (binary) and b1 (unary), leaves b0' and b1'.
inline const std::vector<Label> kTdbtaInternal{"b0", "b1"};
inline const std::vector<Label> kTdbtaLeaves{"b0'", "b1'"};

struct GeneratedInstance {
  Instance instance;
  bool ground_truth = false;  // does the instance typecheck?
  std::string oracle;         // which independent computation produced ground_truth
  std::string provenance;
};

GeneratedInstance gen_dfa_intersection(const std::vector<Dfa>& ms);
GeneratedInstance gen_nfa_universality(const Nfa& n);
GeneratedInstance gen_nfa_emptiness_deg2(const Nfa& n);  // throws DegreeViolation

enum class TdbtaMode { Deleting, Nondeleting };
// Automata follow the ranked convention: b0 transitions have two states, b1 transitions one.
GeneratedInstance gen_tdbta_intersection(const std::vector<TdbtAutomaton>& as, TdbtaMode mode);
std::size_t ceil_log2(std::size_t n);

struct TilingSystem {
  std::vector<Label> tiles;
  std::set<std::pair<Label, Label>> vertical, horizontal;
  std::vector<Label> top, bottom;
  std::size_t width() const { return top.size(); }
};

// The nine output symbols the tiling output DTD is written over.
inline const std::vector<Label> kTilingOutputSymbols{"trigger", "trigger1", "trigger2", "error", "ok",
                                                     "other",   "hor",      "ver",      "dollar"};

GeneratedInstance gen_tiling(const TilingSystem& s);  // throws WidthTooSmall
// nullopt when there are more than max_rows candidate rows.
std::optional<bool> tiling_solvable_oracle(const TilingSystem& s, std::size_t max_rows = 1'000'000);

// Fixed-length block codes; the code length is ⌈log2 |Σ|⌉ (at least 1).
std::size_t code_length(const Alphabet& sigma);
std::string enc_symbol(const Alphabet& sigma, const Label& a);
std::string enc_string(const Alphabet& sigma, const Word& w);
Word binary_word(const std::string& bits);  // "01" -> b0 b1
// Childless nodes count as leaves and get a primed last bit.
Tree enc_tree(const Alphabet& sigma, const Tree& t);
Nfa encode_nfa(const Nfa& a);
TdbtAutomaton encode_tdbta(const TdbtAutomaton& b);
// Alphabet of a TDBTA: internal labels, then leaf labels.
Alphabet tdbta_alphabet(const TdbtAutomaton& b);

struct Profile {
  std::size_t alphabet = 3;
  LangRep::Kind kind = LangRep::Kind::Dfa;
  std::size_t content_states = 4;  // max states of each content automaton
  std::size_t states = 2;          // transducer states
  std::size_t rhs_nodes = 5;
  bool nondeleting = true;
  std::size_t copy_width = 2;
};

Profile dfa_profile();
Profile sl_profile();

Instance gen_random_instance(std::uint64_t seed, const Profile& p);

}  // namespace xtc

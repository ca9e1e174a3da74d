#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>

#include "xtc/schema.hpp"
#include "xtc/transducer.hpp"

namespace xtc {

using OutputSchema = std::variant<Dtd, NtAutomaton>;

struct Instance {
  Dtd input;
  OutputSchema output;
  Transducer transducer;
};

struct Counterexample {
  Tree input;
  Tree output;
  NodeAddress violation;  // first failing node of the output
  std::string expected;   // content model (or start symbol / automaton) that was violated
};

struct Verdict {
  enum class Kind { Typechecks, Counterexample, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<xtc::Counterexample> counterexample;
  std::string note;
};

std::string to_string(Verdict::Kind k);

using StatePair = std::pair<Label, Label>;  // (state, input label)

// Least fixpoint of the two closure rules; d_in must be reduced.
std::set<StatePair> reachable_pairs(const Transducer& t, const Dtd& reduced_in);

bool output_member(const OutputSchema& s, const Tree& t);
bool validate_counterexample(const Instance& inst, const Tree& input);

Verdict tc_fixed_input_sl(const Instance& inst);
Verdict tc_fixed_input_dfa_bc(const Instance& inst);
Verdict tc_fixed_io_nfa(const Instance& inst);

struct Bounds {
  std::size_t max_depth = 4;
  std::size_t max_width = 3;
  std::size_t cap = 200000;
};

Verdict tc_bruteforce(const Instance& inst, const Bounds& b = {});

// Complete for any transducer and NTA/DTD output: saturates the set of behaviour types of input
// subtrees (per state, the relation each output hedge induces on every output content NFA).
// Throws StateSpaceTooLarge past `max_configs` or when a content NFA has more than 64 states.
Verdict tc_saturation(const Instance& inst, std::size_t max_configs = 2'000'000);

enum class Algo { Auto, FixedInputSl, FixedInputDfa, FixedIoNfa, BruteForce, Saturation };

std::string to_string(Algo a);
Algo parse_algo(std::string_view s);  // throws SemanticError

struct TypecheckReport {
  Verdict verdict;
  Algo used = Algo::Auto;
  bool reduced_input = false;
};

// Checks alphabets and transducer well-formedness, reduces d_in, and routes by representation.
// Outside the specialized fragments auto runs brute force and falls back to saturation on Unknown.
TypecheckReport typecheck(const Instance& inst, Algo algo = Algo::Auto, const Bounds& b = {},
                          bool allow_bruteforce = true);

}  // namespace xtc

#pragma once

#include <string>
#include <string_view>

#include "xtc/genbench.hpp"
#include "xtc/typecheck.hpp"

namespace xtc {

// Line-oriented instance files:
//
//   alphabet store dvd title
//   input-dtd start=store
//     store -> regex: dvd dvd*
//     dvd   -> sl: title=1
//   output-dtd start=store        | output-nta final=q1,q2 [states=q0,q1,q2]
//     store -> dfa: {...}         |   (q1, store) -> regex: q0 q0*
//   transducer init=q0 [states=q0,q]
//     (q0, store) -> store($q)
//
// Labels missing from a DTD section get the empty language. '#' starts a comment.
Instance parse_instance(std::string_view text);  // throws SyntaxError / SemanticError with line numbers
std::string write_instance(const Instance& inst);
std::string write_dtd(const Dtd& d);  // content lines only, ∅ contents omitted

// `{states 2; init 0; final 1; 0 b0 1}`, optionally prefixed by `nfa:` or `dfa:`.
Nfa parse_automaton_file(std::string_view text, const Alphabet& sigma);

//   tdbta start=p [states=p,q]
//   (p, b0) -> q q
//   (q, b1') -> eps
TdbtAutomaton parse_tdbta(std::string_view text);

//   tiles x y
//   h x y        (horizontal pair)
//   v x x        (vertical pair: lower, upper)
//   bottom x y
//   top y x
TilingSystem parse_tiling(std::string_view text);

}  // namespace xtc

#include <doctest.h>

#include <random>

#include "xtc/error.hpp"
#include "xtc/genbench.hpp"
#include "xtc/instance_io.hpp"

using namespace xtc;

namespace {

Dfa bin_dfa(const char* regex) { return determinize(regex_to_nfa(parse_regex(regex), binary_alphabet())); }
Nfa bin_nfa(const char* regex) { return regex_to_nfa(parse_regex(regex), binary_alphabet()); }

Verdict::Kind run(const GeneratedInstance& g) { return typecheck(g.instance).verdict.kind; }
Verdict::Kind expected(const GeneratedInstance& g) {
  return g.ground_truth ? Verdict::Kind::Typechecks : Verdict::Kind::Counterexample;
}

TdbtAutomaton leaf_only(const char* leaf) {
  TdbtAutomaton a({"s"}, kTdbtaInternal, kTdbtaLeaves, "s");
  a.set_transition("s", leaf, {});
  return a;
}

TilingSystem tiling(std::vector<Label> tiles, std::set<std::pair<Label, Label>> v, std::set<std::pair<Label, Label>> h,
                    std::vector<Label> top, std::vector<Label> bottom) {
  return TilingSystem{std::move(tiles), std::move(v), std::move(h), std::move(top), std::move(bottom)};
}

}  // namespace

TEST_CASE("dfa intersection instances") {
  GeneratedInstance same = gen_dfa_intersection({bin_dfa("b0*"), bin_dfa("b0*")});
  CHECK_FALSE(same.ground_truth);
  TypecheckReport r = typecheck(same.instance);
  REQUIRE(r.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(validate_counterexample(same.instance, r.verdict.counterexample->input));

  GeneratedInstance apart = gen_dfa_intersection({bin_dfa("b0*"), bin_dfa("(b0 + b1)* b1 (b0 + b1)*")});
  CHECK(apart.ground_truth);
  CHECK(run(apart) == Verdict::Kind::Typechecks);

  GeneratedInstance none = gen_dfa_intersection({Dfa(binary_alphabet(), 1)});
  CHECK(none.ground_truth);
  CHECK(run(none) == Verdict::Kind::Typechecks);
}

TEST_CASE("nfa universality instances") {
  GeneratedInstance all = gen_nfa_universality(bin_nfa("(b0 + b1)*"));
  CHECK(all.ground_truth);
  CHECK(run(all) == Verdict::Kind::Typechecks);

  GeneratedInstance zeros = gen_nfa_universality(bin_nfa("b0*"));
  CHECK_FALSE(zeros.ground_truth);
  TypecheckReport r = typecheck(zeros.instance);
  REQUIRE(r.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(to_string(r.verdict.counterexample->input) == "s(b1)");

  Nfa empty(binary_alphabet(), 1);
  empty.add_initial(0);
  GeneratedInstance e = gen_nfa_universality(empty);
  CHECK_FALSE(e.ground_truth);
  TypecheckReport re = typecheck(e.instance);
  REQUIRE(re.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(to_string(re.verdict.counterexample->input) == "s");
}

TEST_CASE("nfa emptiness instances") {
  Nfa nofinal(binary_alphabet(), 2);
  nofinal.add_initial(0);
  nofinal.add_transition(0, 0, 1);
  GeneratedInstance n = gen_nfa_emptiness_deg2(nofinal);
  CHECK(n.ground_truth);
  CHECK(run(n) == Verdict::Kind::Typechecks);

  GeneratedInstance w = gen_nfa_emptiness_deg2(bin_nfa("b0 b1"));
  CHECK_FALSE(w.ground_truth);
  TypecheckReport r = typecheck(w.instance);
  REQUIRE(r.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(to_string(r.verdict.counterexample->input) == "r(b0(b1(hash)))");

  GeneratedInstance eps = gen_nfa_emptiness_deg2(bin_nfa("eps"));
  TypecheckReport re = typecheck(eps.instance);
  REQUIRE(re.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(to_string(re.verdict.counterexample->input) == "r(hash)");

  Nfa wide(binary_alphabet(), 4);
  wide.add_initial(0);
  for (StateId q = 1; q < 4; ++q) wide.add_transition(0, 0, q);
  CHECK_THROWS_AS(gen_nfa_emptiness_deg2(wide), DegreeViolation);
}

TEST_CASE("tdbta intersection instances") {
  GeneratedInstance one = gen_tdbta_intersection({leaf_only("b1'")}, TdbtaMode::Nondeleting);
  CHECK_FALSE(one.ground_truth);
  TypecheckReport r = typecheck(one.instance);
  REQUIRE(r.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(validate_counterexample(one.instance, r.verdict.counterexample->input));

  for (TdbtaMode m : {TdbtaMode::Nondeleting, TdbtaMode::Deleting}) {
    GeneratedInstance apart = gen_tdbta_intersection({leaf_only("b0'"), leaf_only("b1'")}, m);
    CHECK(apart.ground_truth);
    CHECK(run(apart) == Verdict::Kind::Typechecks);

    GeneratedInstance same = gen_tdbta_intersection({leaf_only("b0'"), leaf_only("b0'")}, m);
    CHECK_FALSE(same.ground_truth);
    CHECK(run(same) == Verdict::Kind::Counterexample);
  }
  GeneratedInstance del = gen_tdbta_intersection({leaf_only("b0'"), leaf_only("b1'")}, TdbtaMode::Deleting);
  CHECK_FALSE(analyze(del.instance.transducer).nondeleting);
  CHECK(analyze(del.instance.transducer).copying_width == 2);

  TdbtAutomaton bad({"s"}, kTdbtaInternal, kTdbtaLeaves, "s");
  bad.set_transition("s", "b1", {"s", "s"});
  CHECK_THROWS_AS(gen_tdbta_intersection({bad}, TdbtaMode::Nondeleting), SemanticError);
}

TEST_CASE("tiling instances and oracle") {
  auto one = tiling({"t"}, {{"t", "t"}}, {{"t", "t"}}, {"t", "t"}, {"t", "t"});
  CHECK(tiling_solvable_oracle(one) == true);
  GeneratedInstance g1 = gen_tiling(one);
  CHECK_FALSE(g1.ground_truth);
  CHECK(run(g1) == expected(g1));

  auto stuck = tiling({"x", "y"}, {}, {{"x", "y"}, {"y", "x"}, {"x", "x"}, {"y", "y"}}, {"y", "y"}, {"x", "x"});
  CHECK(tiling_solvable_oracle(stuck) == false);
  GeneratedInstance g2 = gen_tiling(stuck);
  CHECK(g2.ground_truth);
  CHECK(run(g2) == Verdict::Kind::Typechecks);

  std::set<std::pair<Label, Label>> full{{"x", "x"}, {"x", "y"}, {"y", "x"}, {"y", "y"}};
  auto open = tiling({"x", "y"}, full, full, {"x", "y"}, {"x", "y"});
  CHECK(tiling_solvable_oracle(open) == true);
  GeneratedInstance g3 = gen_tiling(open);
  CHECK(run(g3) == Verdict::Kind::Counterexample);

  // two rows: bottom x y, then y x
  auto stripes = tiling({"x", "y"}, {{"x", "y"}, {"y", "x"}}, {{"x", "y"}, {"y", "x"}}, {"y", "x"}, {"x", "y"});
  CHECK(tiling_solvable_oracle(stripes) == true);
  // the same but the top row can never be reached
  auto never = tiling({"x", "y"}, {{"x", "y"}, {"y", "x"}}, {{"x", "y"}, {"y", "x"}}, {"y", "y"}, {"x", "y"});
  CHECK(tiling_solvable_oracle(never) == false);

  CHECK_THROWS_AS(gen_tiling(tiling({"t"}, {}, {}, {"t"}, {"t"})), WidthTooSmall);
}

TEST_CASE("block codes") {
  Alphabet ab({"a", "b"});
  CHECK(code_length(ab) == 1);
  CHECK(enc_symbol(ab, "a") == "0");
  CHECK(enc_symbol(ab, "b") == "1");
  Alphabet abc({"a", "b", "c"});
  CHECK(code_length(abc) == 2);
  std::set<std::string> codes;
  for (const Label& x : abc.symbols()) codes.insert(enc_symbol(abc, x));
  CHECK(codes.size() == 3);
  CHECK(code_length(Alphabet({"a"})) == 1);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(5) == 3);
  CHECK(binary_word("01") == Word{"b0", "b1"});
  CHECK(to_string(enc_tree(abc, parse_tree("c(a b)"))) == "b1(b0(b0(b0') b0(b1')))");
}

TEST_CASE("encoded automata accept exactly the encoded words") {
  std::mt19937_64 rng(3);
  Alphabet abc({"a", "b", "c"});
  std::vector<Word> words{{}};
  for (std::size_t len = 0, lo = 0; len < 4; ++len) {
    std::size_t hi = words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (const Label& x : abc.symbols()) {
        Word w = words[i];
        w.push_back(x);
        words.push_back(w);
      }
    lo = hi;
  }
  for (int round = 0; round < 25; ++round) {
    Nfa a(abc, 3);
    a.add_initial(0);
    for (StateId q = 0; q < 3; ++q) {
      a.set_final(q, rng() % 2);
      for (SymbolId c = 0; c < 3; ++c)
        for (StateId p = 0; p < 3; ++p)
          if (rng() % 3 == 0) a.add_transition(q, c, p);
    }
    Nfa e = encode_nfa(a);
    for (const Word& w : words)
      REQUIRE(nfa_membership(e, binary_word(enc_string(abc, w))) == nfa_membership(a, w));
  }
}

TEST_CASE("random instances") {
  Instance a = gen_random_instance(1, dfa_profile());
  CHECK(validate(a.transducer).empty());
  CHECK(a.input.all_kind(LangRep::Kind::Dfa));
  CHECK(write_instance(a) == write_instance(gen_random_instance(1, dfa_profile())));
  CHECK(write_instance(a) != write_instance(gen_random_instance(2, dfa_profile())));
  Instance s = gen_random_instance(2, sl_profile());
  CHECK(s.input.all_kind(LangRep::Kind::Sl));
  CHECK(std::get<Dtd>(s.output).all_kind(LangRep::Kind::Sl));
  CHECK(analyze(s.transducer).nondeleting);
}

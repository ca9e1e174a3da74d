#include <doctest.h>

#include <fstream>
#include <sstream>

#include "xtc/error.hpp"
#include "xtc/instance_io.hpp"

using namespace xtc;

namespace {

std::string example(const std::string& name) {
  std::ifstream in(std::string(XTC_EXAMPLES_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"(
alphabet s a
input-dtd start=s
  s -> regex: a*
output-dtd start=s
  s -> regex: a*
transducer init=q0
  (q0, s) -> s($q)
  (q, a) -> a
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const SyntaxError& e) {
    return e.line();
  } catch (const SemanticError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("store example") {
  Instance i = parse_instance(example("store.tcheck"));
  CHECK(dtd_validate(i.input, parse_tree("store(dvd(title price) dvd(title price) dvd(title price discount))")));
  CHECK(i.input.content("dvd").kind() == LangRep::Kind::Regex);
  CHECK(std::get<Dtd>(i.output).content("dvd").is_sl());
  CHECK(std::get<Dtd>(i.output).content("discount").kind() == LangRep::Kind::Regex);  // unlisted: ∅
  CHECK_FALSE(std::get<Dtd>(i.output).content("discount").accepts(Word{}));
}

TEST_CASE("nesting example file") {
  Instance i = parse_instance(example("nesting.tcheck"));
  TransducerAnalysis a = analyze(i.transducer);
  CHECK_FALSE(a.nondeleting);
  CHECK(a.copying_width == 2);
  CHECK(to_string(apply(i.transducer, parse_tree("b(b b(a b) a(b))"))) == "d(c c(d(e) d c c) c d)");
}

TEST_CASE("boolean example") {
  Instance i = parse_instance(example("boolean.tcheck"));
  const auto& b = std::get<NtAutomaton>(i.output);
  CHECK(nta_membership(b, parse_tree("and(or(false not(false) false) and(true) or(false false true))")).accepted);
  CHECK_FALSE(nta_membership(b, parse_tree("false")).accepted);
  CHECK(typecheck(i).verdict.kind == Verdict::Kind::Counterexample);
}

TEST_CASE("missing and duplicate sections") {
  std::string t = kTiny;
  std::string no_out = t.substr(0, t.find("output-dtd")) + t.substr(t.find("transducer"));
  CHECK_THROWS_AS(parse_instance(no_out), SemanticError);
  std::string no_tr = t.substr(0, t.find("transducer"));
  CHECK_THROWS_AS(parse_instance(no_tr), SemanticError);
  CHECK_THROWS_AS(parse_instance(t + "input-dtd start=s\n"), SemanticError);
  CHECK(error_line(t + "  (q, a) -> a a\n") == 10);
}

TEST_CASE("errors carry line numbers") {
  std::string t = kTiny;
  CHECK(error_line(std::string(t).replace(t.find("a*"), 2, "a*(")) == 4);
  CHECK(error_line(std::string(t).replace(t.find("(q, a) -> a"), 11, "(q, a) -> z")) == 9);
  CHECK(error_line(std::string(t).replace(t.find("s($q)"), 5, "s($r)")) != 0);
  CHECK(error_line(std::string(t) + "garbage here\n") == 10);
  CHECK_THROWS_AS(parse_instance(std::string(t).replace(t.find("start=s"), 7, "start=x")), Error);
}

TEST_CASE("write then parse") {
  for (const char* f : {"store.tcheck", "identity-store.tcheck", "nesting.tcheck", "boolean.tcheck"}) {
    Instance i = parse_instance(example(f));
    std::string once = write_instance(i);
    CHECK_MESSAGE(write_instance(parse_instance(once)) == once, f);
  }
}

TEST_CASE("side files") {
  Nfa m = parse_automaton_file(example("m1.nfa"), binary_alphabet());
  CHECK(nfa_membership(m, {"b1", "b0", "b1"}));
  CHECK_FALSE(nfa_membership(m, {"b1"}));
  CHECK_THROWS(parse_automaton_file("dfa: {states 1; init 0; 0 b0 0; 0 b0 0; 0 b0 1}", binary_alphabet()));

  TdbtAutomaton a = parse_tdbta(example("left-b1.tdbta"));
  CHECK(tdbta_validate(a).empty());
  CHECK(tdbta_membership(a, parse_tree("b0(b1(b0') b1')")));
  CHECK_FALSE(tdbta_membership(a, parse_tree("b0(b0' b1')")));

  TilingSystem s = parse_tiling(example("stripes.tiling"));
  CHECK(s.width() == 2);
  CHECK(s.vertical.count({"x", "y"}));
  CHECK(tiling_solvable_oracle(s) == true);
  CHECK_THROWS(parse_tiling("tiles x\nq x y\n"));
}

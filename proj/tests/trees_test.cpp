#include <doctest.h>

#include "xtc/error.hpp"
#include "xtc/tree.hpp"

using namespace xtc;

namespace {
const char* kStore = "store(dvd(title price) dvd(title price) dvd(title price discount))";
}

TEST_CASE("depth") {
  CHECK(depth(Tree::empty()) == 0);
  CHECK(depth(parse_tree(kStore)) == 3);
  CHECK(depth(parse_hedge("a b(c)")) == 2);
  CHECK(depth(Hedge{}) == 0);
}

TEST_CASE("label_at on trees and hedges") {
  Tree t = parse_tree(kStore);
  CHECK(label_at(t, {3, 3}) == "discount");
  CHECK(label_at(t, {}) == "store");
  CHECK(label_at(t, {1, 2}) == "price");
  CHECK_THROWS_AS(label_at(t, {1, 3}), InvalidAddress);
  CHECK_THROWS_AS(label_at(t, {0}), InvalidAddress);

  Hedge h = parse_hedge(std::string(kStore) + " store");
  CHECK(label_at(h, {1, 3, 3}) == "discount");
  CHECK(label_at(h, {2}) == "store");
  CHECK_THROWS_AS(label_at(h, {3}), InvalidAddress);
}

TEST_CASE("top") {
  CHECK(top(Hedge{}).empty());
  CHECK(top(parse_hedge("d(e) d c c")) == std::vector<Label>{"d", "d", "c", "c"});
  CHECK(top(parse_hedge(kStore)) == std::vector<Label>{"store"});
}

TEST_CASE("parse and print") {
  Tree a = parse_tree("a");
  CHECK(a.root() == leaf("a"));
  Tree s = parse_tree("store(dvd(title price))");
  CHECK(depth(s) == 3);
  CHECK(to_string(s) == "store(dvd(title price))");
  CHECK(to_string(parse_tree("  x( y  z() )")) == "x(y z)");
  CHECK(to_string(Tree::empty()) == "");
  CHECK(parse_tree("b1'(x_2)").root().label == "b1'");

  CHECK_THROWS_AS(parse_tree("a("), SyntaxError);
  CHECK_THROWS_AS(parse_tree("a b"), SyntaxError);
  CHECK_THROWS_AS(parse_tree(""), SyntaxError);
  CHECK_THROWS_AS(parse_tree("a)"), SyntaxError);
}

TEST_CASE("round trip") {
  for (const char* s : {"a", "a(b c(d e(f)) g)", kStore}) CHECK(to_string(parse_tree(s)) == s);
}

TEST_CASE("domain in document order") {
  Tree t = parse_tree("a(b(c) d)");
  auto dom = tree_domain(t);
  REQUIRE(dom.size() == 4);
  CHECK(dom[0].empty());
  CHECK(dom[1] == NodeAddress{1});
  CHECK(dom[2] == NodeAddress{1, 1});
  CHECK(dom[3] == NodeAddress{2});
  CHECK(node_count(t) == 4);
  CHECK(to_string(NodeAddress{1, 2}) != to_string(NodeAddress{12}));
}

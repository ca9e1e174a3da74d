#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xtc {

using Label = std::string;

struct Node;
using Hedge = std::vector<Node>;

struct Node {
  Label label;
  Hedge children;

  friend bool operator==(const Node&, const Node&) = default;
};

inline Node leaf(Label l) { return Node{std::move(l), {}}; }

// A tree is either empty or a node. The empty tree only shows up as a transducer result.
class Tree {
 public:
  Tree() = default;
  Tree(Node root) : root_(std::move(root)) {}  // NOLINT implicit on purpose
  static Tree empty() { return Tree(); }

  bool is_empty() const { return !root_.has_value(); }
  const Node& root() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::optional<Node> root_;
};

// 1-based child indices. Tree addresses start at the root (empty path = ε);
// hedge addresses use the first component to pick the tree.
using NodeAddress = std::vector<std::size_t>;

std::size_t depth(const Node& n);
std::size_t depth(const Hedge& h);
std::size_t depth(const Tree& t);

std::size_t node_count(const Node& n);
std::size_t node_count(const Tree& t);

const Label& label_at(const Tree& t, const NodeAddress& u);
const Label& label_at(const Hedge& h, const NodeAddress& u);
const Node& node_at(const Node& n, const NodeAddress& u);

std::vector<Label> top(const Hedge& h);

// Dom_T in document (pre-)order.
std::vector<NodeAddress> tree_domain(const Tree& t);

Tree parse_tree(std::string_view text);
Hedge parse_hedge(std::string_view text);

std::string to_string(const Node& n);
std::string to_string(const Hedge& h);
std::string to_string(const Tree& t);  // empty tree -> ""
std::string to_string(const NodeAddress& u);  // ε for the root

}  // namespace xtc

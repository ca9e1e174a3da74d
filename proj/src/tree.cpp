#include "xtc/tree.hpp"

#include <algorithm>

#include "scan.hpp"
#include "xtc/error.hpp"

namespace xtc {

const Node& Tree::root() const {
  if (!root_) throw InvalidAddress("empty tree has no root");
  return *root_;
}

std::size_t depth(const Node& n) { return 1 + depth(n.children); }

std::size_t depth(const Hedge& h) {
  std::size_t d = 0;
  for (const Node& c : h) d = std::max(d, depth(c));
  return d;
}

std::size_t depth(const Tree& t) { return t.is_empty() ? 0 : depth(t.root()); }

std::size_t node_count(const Node& n) {
  std::size_t c = 1;
  for (const Node& k : n.children) c += node_count(k);
  return c;
}

std::size_t node_count(const Tree& t) { return t.is_empty() ? 0 : node_count(t.root()); }

const Node& node_at(const Node& n, const NodeAddress& u) {
  const Node* cur = &n;
  for (std::size_t i : u) {
    if (i == 0 || i > cur->children.size())
      throw InvalidAddress("address " + to_string(u) + " not in domain");
    cur = &cur->children[i - 1];
  }
  return *cur;
}

const Label& label_at(const Tree& t, const NodeAddress& u) {
  if (t.is_empty()) throw InvalidAddress("empty tree has no nodes");
  return node_at(t.root(), u).label;
}

const Label& label_at(const Hedge& h, const NodeAddress& u) {
  if (u.empty() || u[0] == 0 || u[0] > h.size())
    throw InvalidAddress("address " + to_string(u) + " not in hedge domain");
  return node_at(h[u[0] - 1], NodeAddress(u.begin() + 1, u.end())).label;
}

std::vector<Label> top(const Hedge& h) {
  std::vector<Label> out;
  out.reserve(h.size());
  for (const Node& n : h) out.push_back(n.label);
  return out;
}

namespace {

void collect(const Node& n, NodeAddress& cur, std::vector<NodeAddress>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    cur.push_back(i + 1);
    collect(n.children[i], cur, out);
    cur.pop_back();
  }
}

Node parse_node(detail::Scanner& sc) {
  Node n{sc.ident(), {}};
  if (sc.accept('(')) {
    while (sc.peek() != ')') {
      if (sc.at_end()) sc.fail("unbalanced '('");
      n.children.push_back(parse_node(sc));
    }
    sc.expect(')');
  }
  return n;
}

void write(const Node& n, std::string& out) {
  out += n.label;
  if (n.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ' ';
    write(n.children[i], out);
  }
  out += ')';
}

}  // namespace

std::vector<NodeAddress> tree_domain(const Tree& t) {
  std::vector<NodeAddress> out;
  if (t.is_empty()) return out;
  NodeAddress cur;
  collect(t.root(), cur, out);
  return out;
}

Hedge parse_hedge(std::string_view text) {
  detail::Scanner sc(text);
  Hedge h;
  while (!sc.at_end()) h.push_back(parse_node(sc));
  return h;
}

Tree parse_tree(std::string_view text) {
  detail::Scanner sc(text);
  Node n = parse_node(sc);
  if (!sc.at_end()) sc.fail("trailing input after tree");
  return Tree(std::move(n));
}

std::string to_string(const Node& n) {
  std::string s;
  write(n, s);
  return s;
}

std::string to_string(const Hedge& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ' ';
    write(h[i], s);
  }
  return s;
}

std::string to_string(const Tree& t) { return t.is_empty() ? std::string() : to_string(t.root()); }

std::string to_string(const NodeAddress& u) {
  if (u.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(u[i]);
  }
  return s;
}

}  // namespace xtc

// Copyright 2026 The vsplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vsplit/genealogy.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vsplit {

BinaryTree::BinaryTree() { nodes_.emplace_back(); }

BinaryTree BinaryTree::complete(std::uint32_t depth) {
  BinaryTree tree;
  std::vector<NodeId> frontier{tree.root()};
  for (std::uint32_t level = 0; level < depth; ++level) {
    std::vector<NodeId> next;
    next.reserve(2 * frontier.size());
    for (NodeId n : frontier) {
      auto kids = tree.split_leaf(n, static_cast<double>(level + 1));
      next.push_back(kids[0]);
      next.push_back(kids[1]);
    }
    frontier = std::move(next);
  }
  return tree;
}

const BinaryTree::Node& BinaryTree::node(NodeId n) const {
  if (n >= nodes_.size()) throw std::out_of_range("node not in tree: " + std::to_string(n));
  return nodes_[n];
}

std::vector<NodeId> BinaryTree::leaves() const {
  std::vector<NodeId> out;
  out.reserve(leaf_count_);
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].children[0] == kNoNode) out.push_back(n);
  }
  return out;
}

std::array<NodeId, 2> BinaryTree::split_leaf(NodeId leaf, double time) {
  if (!is_leaf(leaf)) throw std::invalid_argument("split_leaf: node is internal");
  const auto a = static_cast<NodeId>(nodes_.size());
  const NodeId b = a + 1;
  const std::uint32_t d = nodes_[leaf].depth + 1;
  nodes_.push_back({leaf, {kNoNode, kNoNode}, d, time});
  nodes_.push_back({leaf, {kNoNode, kNoNode}, d, time});
  nodes_[leaf].children = {a, b};
  ++leaf_count_;
  return {a, b};
}

std::string BinaryTree::to_text(double end_time) const {
  std::string out;
  char buf[32];
  auto emit = [&](auto&& self, NodeId n) -> void {
    const Node& x = nodes_[n];
    double end = end_time;
    if (x.children[0] != kNoNode) {
      out.push_back('(');
      self(self, x.children[0]);
      out.push_back(',');
      self(self, x.children[1]);
      out.push_back(')');
      end = nodes_[x.children[0]].birth;
    }
    std::snprintf(buf, sizeof buf, "%u:%.6g", n, end - x.birth);
    out += buf;
  };
  emit(emit, root());
  out.push_back(';');
  return out;
}

BinaryTree sample_yule_tree(double t, RandomStream& rng, std::size_t max_leaves) {
  if (!(t >= 0.0)) throw std::invalid_argument("sample_yule_tree: t must be non-negative");
  BinaryTree tree;
  // Embedded jump chain: with k living leaves the next split comes after
  // Exp(k) and hits a uniformly chosen leaf.
  std::vector<NodeId> living{tree.root()};
  double clock = 0.0;
  for (;;) {
    clock += rng.exponential(static_cast<double>(living.size()));
    if (clock >= t) break;
    if (living.size() >= max_leaves) {
      throw std::length_error("sample_yule_tree: leaf cap exceeded");
    }
    const std::size_t i = rng.uniform_index(living.size());
    const NodeId leaf = living[i];
    auto kids = tree.split_leaf(leaf, clock);
    living[i] = kids[0];
    living.push_back(kids[1]);
  }
  return tree;
}

std::uint32_t tree_distance(const BinaryTree& tree, NodeId x, NodeId y) {
  if (!tree.contains(x) || !tree.contains(y)) {
    throw std::out_of_range("tree_distance: leaf not in tree");
  }
  if (!tree.is_leaf(x) || !tree.is_leaf(y)) {
    throw std::invalid_argument("tree_distance: arguments must be leaves");
  }
  std::uint32_t d = 0;
  while (x != y) {
    if (tree.depth(x) >= tree.depth(y)) {
      x = tree.parent(x);
    } else {
      y = tree.parent(y);
    }
    ++d;
  }
  return d;
}

void DyadicSum::add_power(std::uint32_t exponent, std::uint64_t count) {
  if (counts_.size() <= exponent) counts_.resize(exponent + 1, 0);
  counts_[exponent] += count;
}

void DyadicSum::normalize() const {
  for (std::size_t d = counts_.size(); d-- > 1;) {
    counts_[d - 1] += counts_[d] >> 1;
    counts_[d] &= 1;
  }
}

double DyadicSum::to_double() const {
  double s = 0.0;
  for (std::size_t d = 0; d < counts_.size(); ++d) {
    s += std::ldexp(static_cast<double>(counts_[d]), -static_cast<int>(d));
  }
  return s;
}

bool DyadicSum::is_one() const {
  normalize();
  if (counts_.empty() || counts_[0] != 1) return false;
  for (std::size_t d = 1; d < counts_.size(); ++d) {
    if (counts_[d] != 0) return false;
  }
  return true;
}

bool DyadicSum::at_most_one() const {
  normalize();
  if (counts_.empty() || counts_[0] == 0) return true;
  return is_one();
}

namespace {

// Visits leaves reachable from `from` without entering `blocked`, reporting
// each leaf's distance.
template <typename Fn>
void for_each_reachable_leaf(const BinaryTree& tree, NodeId from, NodeId blocked, Fn&& fn) {
  if (!tree.contains(from)) throw std::out_of_range("node not in tree");
  struct Item {
    NodeId node;
    NodeId came_from;
    std::uint32_t dist;
  };
  std::vector<Item> stack{{from, kNoNode, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (tree.is_leaf(it.node)) fn(it.node, it.dist);
    auto visit = [&](NodeId next) {
      if (next != kNoNode && next != blocked && next != it.came_from) {
        stack.push_back({next, it.node, it.dist + 1});
      }
    };
    visit(tree.parent(it.node));
    auto kids = tree.children(it.node);
    visit(kids[0]);
    visit(kids[1]);
  }
}

}  // namespace

double leaf_weight(const BinaryTree& tree, NodeId from, NodeId blocked) {
  double s = 0.0;
  for_each_reachable_leaf(tree, from, blocked, [&](NodeId, std::uint32_t d) {
    s += std::ldexp(1.0, -static_cast<int>(d));
  });
  return s;
}

DyadicSum leaf_weight_exact(const BinaryTree& tree, NodeId from, NodeId blocked) {
  DyadicSum s;
  for_each_reachable_leaf(tree, from, blocked,
                          [&](NodeId, std::uint32_t d) { s.add_power(d); });
  return s;
}

double crossing_rate(const BinaryTree& tree, NodeId child) {
  if (!tree.contains(child)) throw std::out_of_range("crossing_rate: edge not in tree");
  const NodeId parent = tree.parent(child);
  if (parent == kNoNode) throw std::invalid_argument("crossing_rate: root has no parent edge");
  return leaf_weight(tree, parent, child) * leaf_weight(tree, child, parent);
}

std::uint32_t canopy_distance(std::uint64_t i, std::uint64_t j) {
  if (i == j) return 0;
  return 2 * static_cast<std::uint32_t>(std::bit_width(i ^ j));
}

NodeId forward_walk_leaf(const BinaryTree& tree, RandomStream& rng, NodeId from) {
  NodeId n = from;
  while (!tree.is_leaf(n)) n = tree.children(n)[rng.coin() ? 1 : 0];
  return n;
}

void SpineState::extend_with_label(double label, RandomStream& rng, std::size_t max_leaves) {
  if (!(label > 0.0)) throw std::invalid_argument("spine labels must be positive");
  const double age = (ages_.empty() ? 0.0 : ages_.back()) + label;
  subtrees_.push_back(sample_yule_tree(age, rng, max_leaves));
  labels_.push_back(label);
  ages_.push_back(age);
}

SpineState extend_spine(SpineState spine, RandomStream& rng, std::size_t max_leaves) {
  double label;
  do {
    label = rng.exponential(1.0);
  } while (!(label > 0.0));
  spine.extend_with_label(label, rng, max_leaves);
  return spine;
}

std::uint32_t spine_distance(const SpineState& spine, SpineLeaf x, SpineLeaf y) {
  if (x.subtree > y.subtree) std::swap(x, y);
  if (y.subtree == 0) return 0;  // both are v_0
  if (x.subtree == y.subtree) {
    return tree_distance(spine.subtree(x.subtree), x.node, y.node);
  }
  const auto m = static_cast<std::uint32_t>(x.subtree);
  const auto n = static_cast<std::uint32_t>(y.subtree);
  const std::uint32_t down = spine.subtree(n).depth(y.node);
  if (m == 0) return n + 1 + down;
  // x up to w_m, across to v_m, along the spine to v_n, down through w_n.
  return spine.subtree(m).depth(x.node) + 1 + (n - m) + 1 + down;
}

}  // namespace vsplit

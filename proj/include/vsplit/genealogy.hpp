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

#ifndef VSPLIT_GENEALOGY_HPP_
#define VSPLIT_GENEALOGY_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vsplit/random.hpp"

namespace vsplit {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Finite rooted tree in which every node has zero or two children. Nodes are
// created in order, so a parent always has a smaller id than its children.
class BinaryTree {
 public:
  // A single node which is both root and leaf, born at time 0.
  BinaryTree();

  // Complete binary tree with 2^depth leaves.
  static BinaryTree complete(std::uint32_t depth);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t leaf_count() const { return leaf_count_; }
  bool contains(NodeId n) const { return n < nodes_.size(); }
  bool is_leaf(NodeId n) const { return node(n).children[0] == kNoNode; }
  NodeId parent(NodeId n) const { return node(n).parent; }
  std::array<NodeId, 2> children(NodeId n) const { return node(n).children; }
  std::uint32_t depth(NodeId n) const { return node(n).depth; }
  double birth_time(NodeId n) const { return node(n).birth; }

  // Leaves in ascending node id.
  std::vector<NodeId> leaves() const;

  // Turns a leaf into an internal node with two fresh leaf children born at
  // `time`. Returns the children.
  std::array<NodeId, 2> split_leaf(NodeId leaf, double time);

  // Nested-parenthesis dump: leaves print as their id, internal nodes as
  // "(left,right)id", each followed by ":<branch length>", and a final ';'.
  std::string to_text(double end_time) const;

 private:
  struct Node {
    NodeId parent = kNoNode;
    std::array<NodeId, 2> children{kNoNode, kNoNode};
    std::uint32_t depth = 0;
    double birth = 0.0;
  };
  const Node& node(NodeId n) const;

  std::vector<Node> nodes_;
  std::size_t leaf_count_ = 1;
};

// Genealogy of a rate-1 binary splitting process run for time t. Leaf count is
// Geo(e^{-t}) on {1, 2, ...}. Throws std::invalid_argument for t < 0 and
// std::length_error when the tree would exceed `max_leaves`.
BinaryTree sample_yule_tree(double t, RandomStream& rng,
                            std::size_t max_leaves = 10'000'000);

// Edge count of the path between two nodes. Throws std::out_of_range for
// nodes outside the tree and std::invalid_argument for non-leaves.
std::uint32_t tree_distance(const BinaryTree& tree, NodeId x, NodeId y);

// Exact finite sum of dyadic terms count * 2^{-exponent}.
class DyadicSum {
 public:
  void add_power(std::uint32_t exponent, std::uint64_t count = 1);
  double to_double() const;
  bool is_one() const;
  // True iff the sum is at most one.
  bool at_most_one() const;

 private:
  void normalize() const;
  mutable std::vector<std::uint64_t> counts_;
};

// Sum of 2^{-d(x, from)} over leaves x reachable from `from` without stepping
// onto `blocked` (kNoNode blocks nothing). A leaf `from` contributes 1.
double leaf_weight(const BinaryTree& tree, NodeId from, NodeId blocked = kNoNode);
DyadicSum leaf_weight_exact(const BinaryTree& tree, NodeId from, NodeId blocked = kNoNode);

// Rate z of edges crossing the tree edge between `child` and its parent in the
// tree-Poisson edge model, divided by lambda: the product of the two
// side weights. Never exceeds 1.
double crossing_rate(const BinaryTree& tree, NodeId child);

// Distance between leaves i and j of the binary canopy tree whose leaves are
// indexed by the naturals: twice the position of the highest differing bit.
std::uint32_t canopy_distance(std::uint64_t i, std::uint64_t j);

// Random descent from `from` choosing a uniformly random child at each step.
// Leaf x is returned with probability 2^{-(depth(x) - depth(from))}.
NodeId forward_walk_leaf(const BinaryTree& tree, RandomStream& rng, NodeId from = 0);

// Lazily revealed prefix of the spine tree: a path v_0 v_1 ... v_n with edge
// labels s_i > 0 and a Yule tree T_i of age a_i = s_1 + ... + s_i hung from v_i.
class SpineState {
 public:
  std::size_t length() const { return labels_.size(); }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<double>& ages() const { return ages_; }
  // 1-based, matching the spine vertex the subtree hangs from.
  const BinaryTree& subtree(std::size_t i) const { return subtrees_.at(i - 1); }

  // Appends a label and the matching subtree; the label must be positive.
  void extend_with_label(double label, RandomStream& rng, std::size_t max_leaves);

 private:
  std::vector<double> labels_;
  std::vector<double> ages_;
  std::vector<BinaryTree> subtrees_;
};

SpineState extend_spine(SpineState spine, RandomStream& rng,
                        std::size_t max_leaves = 10'000'000);

// A leaf of the spine tree: subtree index 0 denotes v_0 itself.
struct SpineLeaf {
  std::size_t subtree;
  NodeId node;
};

std::uint32_t spine_distance(const SpineState& spine, SpineLeaf x, SpineLeaf y);

}  // namespace vsplit

#endif  // VSPLIT_GENEALOGY_HPP_

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

#ifndef VSPLIT_LAZY_TREE_HPP_
#define VSPLIT_LAZY_TREE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "vsplit/genealogy.hpp"
#include "vsplit/random.hpp"

namespace vsplit {

// A binary tree revealed on demand. Only nodes touched by walks exist in
// memory; each node decides whether it is internal when it is first created.
//
// Yule mode reproduces T(age) exactly: a node born at time b carries an
// Exp(1) clock tau and is internal iff b + tau < age, in which case both
// children are born at b + tau. Complete mode is the complete binary tree of
// the given depth (the canopy tree's building blocks).
class LazySubtree {
 public:
  static LazySubtree yule(double age, RandomStream& rng);
  static LazySubtree complete(std::uint32_t depth);

  NodeId root() const { return 0; }
  std::size_t materialized() const { return nodes_.size(); }
  bool is_leaf(NodeId n) const { return !nodes_[n].internal; }
  NodeId parent(NodeId n) const { return nodes_[n].parent; }
  std::uint32_t depth(NodeId n) const { return nodes_[n].depth; }

  // Child `which` (0 or 1) of an internal node, created if necessary.
  NodeId child(NodeId n, int which, RandomStream& rng);

  // Uniform random descent from `from` to a leaf.
  NodeId forward_walk(NodeId from, RandomStream& rng);

  // The other child of `n`'s parent; n must not be the root.
  NodeId sibling(NodeId n, RandomStream& rng);

 private:
  struct Node {
    NodeId parent;
    std::array<NodeId, 2> children;
    std::uint32_t depth;
    bool internal;
    double split_time;  // Yule mode only
  };

  NodeId make_node(NodeId parent, std::uint32_t depth, double birth, RandomStream& rng);

  bool yule_ = true;
  double age_ = 0.0;
  std::uint32_t full_depth_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace vsplit

#endif  // VSPLIT_LAZY_TREE_HPP_

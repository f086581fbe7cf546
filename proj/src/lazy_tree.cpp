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

#include "vsplit/lazy_tree.hpp"

namespace vsplit {

LazySubtree LazySubtree::yule(double age, RandomStream& rng) {
  LazySubtree t;
  t.yule_ = true;
  t.age_ = age;
  t.make_node(kNoNode, 0, 0.0, rng);
  return t;
}

LazySubtree LazySubtree::complete(std::uint32_t depth) {
  LazySubtree t;
  t.yule_ = false;
  t.full_depth_ = depth;
  t.nodes_.push_back({kNoNode, {kNoNode, kNoNode}, 0, depth > 0, 0.0});
  return t;
}

NodeId LazySubtree::make_node(NodeId parent, std::uint32_t depth, double birth,
                              RandomStream& rng) {
  Node n{parent, {kNoNode, kNoNode}, depth, false, 0.0};
  if (yule_) {
    n.split_time = birth + rng.exponential(1.0);
    n.internal = n.split_time < age_;
  } else {
    n.internal = depth < full_depth_;
  }
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId LazySubtree::child(NodeId n, int which, RandomStream& rng) {
  NodeId c = nodes_[n].children[which];
  if (c == kNoNode) {
    c = make_node(n, nodes_[n].depth + 1, nodes_[n].split_time, rng);
    nodes_[n].children[which] = c;
  }
  return c;
}

NodeId LazySubtree::forward_walk(NodeId from, RandomStream& rng) {
  NodeId n = from;
  while (nodes_[n].internal) n = child(n, rng.coin() ? 1 : 0, rng);
  return n;
}

NodeId LazySubtree::sibling(NodeId n, RandomStream& rng) {
  const NodeId p = nodes_[n].parent;
  return child(p, nodes_[p].children[0] == n ? 1 : 0, rng);
}

}  // namespace vsplit

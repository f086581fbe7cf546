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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "vsplit/stats.hpp"

namespace vsplit {
namespace {

// Materializes every node and returns the leaf count.
std::size_t expand_all(LazySubtree& t, RandomStream& rng) {
  std::size_t leaves = 0;
  std::vector<NodeId> stack{t.root()};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (t.is_leaf(n)) {
      ++leaves;
      continue;
    }
    stack.push_back(t.child(n, 0, rng));
    stack.push_back(t.child(n, 1, rng));
  }
  return leaves;
}

TEST(LazySubtree, CompleteTreeWalksToFullDepth) {
  RandomStream rng(1);
  LazySubtree t = LazySubtree::complete(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(t.depth(t.forward_walk(t.root(), rng)), 5u);
  EXPECT_EQ(expand_all(t, rng), 32u);
  LazySubtree single = LazySubtree::complete(0);
  EXPECT_TRUE(single.is_leaf(single.root()));
}

TEST(LazySubtree, OnlyTouchedNodesExist) {
  RandomStream rng(2);
  LazySubtree t = LazySubtree::complete(20);
  t.forward_walk(t.root(), rng);
  EXPECT_EQ(t.materialized(), 21u);
}

TEST(LazySubtree, SiblingSharesParent) {
  RandomStream rng(3);
  LazySubtree t = LazySubtree::complete(3);
  const NodeId leaf = t.forward_walk(t.root(), rng);
  const NodeId sib = t.sibling(leaf, rng);
  EXPECT_NE(sib, leaf);
  EXPECT_EQ(t.parent(sib), t.parent(leaf));
  EXPECT_EQ(t.sibling(sib, rng), leaf);
}

TEST(LazySubtree, YuleLeafCountIsGeometric) {
  RandomStream rng(4);
  IntDistribution d;
  for (int i = 0; i < 100000; ++i) {
    LazySubtree t = LazySubtree::yule(1.0, rng);
    d.add(static_cast<std::int64_t>(expand_all(t, rng)));
  }
  EXPECT_GT(fit_geometric(d, std::exp(-1.0)).p_value, 0.01);
}

TEST(LazySubtree, WalkDepthMatchesEagerTree) {
  // Oracle: a fully sampled tree of the same age walked from its root.
  RandomStream rng(5);
  IntDistribution lazy;
  IntDistribution eager;
  for (int i = 0; i < 100000; ++i) {
    LazySubtree t = LazySubtree::yule(2.0, rng);
    lazy.add(t.depth(t.forward_walk(t.root(), rng)));
    const BinaryTree b = sample_yule_tree(2.0, rng);
    eager.add(b.depth(forward_walk_leaf(b, rng)));
  }
  RandomStream boot(6);
  const NoiseFloor floor = tv_noise_floor(lazy, eager, boot);
  EXPECT_LT(tv_distance(lazy, eager), floor.quantile_value + 0.005);
}

TEST(LazySubtree, ZeroAgeIsALeaf) {
  RandomStream rng(7);
  LazySubtree t = LazySubtree::yule(0.0, rng);
  EXPECT_TRUE(t.is_leaf(t.root()));
  EXPECT_EQ(t.forward_walk(t.root(), rng), t.root());
}

}  // namespace
}  // namespace vsplit

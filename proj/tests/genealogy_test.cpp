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

#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "vsplit/stats.hpp"

namespace vsplit {
namespace {

bool below(const BinaryTree& t, NodeId x, NodeId top) {
  for (NodeId n = x; n != kNoNode; n = t.parent(n)) {
    if (n == top) return true;
  }
  return false;
}

TEST(BinaryTree, SingleNode) {
  const BinaryTree t;
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.leaf_count(), 1u);
  EXPECT_TRUE(t.is_leaf(t.root()));
  EXPECT_DOUBLE_EQ(leaf_weight(t, 0), 1.0);
}

TEST(BinaryTree, SplitLeafKeepsShape) {
  BinaryTree t;
  const auto kids = t.split_leaf(0, 0.5);
  EXPECT_EQ(t.leaf_count(), 2u);
  EXPECT_EQ(t.parent(kids[0]), 0u);
  EXPECT_EQ(t.depth(kids[1]), 1u);
  EXPECT_DOUBLE_EQ(t.birth_time(kids[1]), 0.5);
  EXPECT_THROW(t.split_leaf(0, 1.0), std::invalid_argument);
  EXPECT_EQ(tree_distance(t, kids[0], kids[1]), 2u);
}

TEST(BinaryTree, TextDump) {
  BinaryTree t;
  t.split_leaf(0, 0.25);
  EXPECT_EQ(t.to_text(1.0), "(1:0.75,2:0.75)0:0.25;");
}

TEST(Yule, NegativeAgeRejected) {
  RandomStream rng(1);
  EXPECT_THROW(sample_yule_tree(-1.0, rng), std::invalid_argument);
  EXPECT_EQ(sample_yule_tree(0.0, rng).leaf_count(), 1u);
}

TEST(Yule, CapIsAnError) {
  RandomStream rng(1);
  EXPECT_THROW(sample_yule_tree(30.0, rng, 1000), std::length_error);
}

TEST(Yule, LeafCountIsGeometric) {
  for (double t : {0.5, 1.0, 2.0}) {
    RandomStream rng(100 + static_cast<std::uint64_t>(t * 10));
    IntDistribution d;
    for (int i = 0; i < 100000; ++i) {
      d.add(static_cast<std::int64_t>(sample_yule_tree(t, rng).leaf_count()));
    }
    EXPECT_GT(fit_geometric(d, std::exp(-t)).p_value, 0.01) << "t=" << t;
  }
}

TEST(Yule, MeanAtLogFour) {
  RandomStream rng(5);
  MeanAccumulator acc;
  for (int i = 0; i < 100000; ++i) {
    acc.add(static_cast<double>(sample_yule_tree(std::log(4.0), rng).leaf_count()));
  }
  EXPECT_NEAR(acc.mean(), 4.0, 3 * acc.estimate().stderr_);
}

TEST(LeafWeight, ExactlyOneForSampledTrees) {
  RandomStream rng(6);
  for (int i = 0; i < 2000; ++i) {
    const BinaryTree t = sample_yule_tree(3.0, rng);
    EXPECT_TRUE(leaf_weight_exact(t, t.root()).is_one());
  }
}

TEST(DyadicSum, Arithmetic) {
  DyadicSum s;
  s.add_power(1);
  s.add_power(2, 2);
  EXPECT_TRUE(s.is_one());
  s.add_power(60);
  EXPECT_FALSE(s.is_one());
  EXPECT_FALSE(s.at_most_one());
  DyadicSum h;
  h.add_power(1);
  h.add_power(3);
  EXPECT_TRUE(h.at_most_one());
  EXPECT_DOUBLE_EQ(h.to_double(), 0.625);
}

TEST(CrossingRate, TwoLeafTree) {
  BinaryTree t;
  const auto kids = t.split_leaf(0, 0.1);
  EXPECT_DOUBLE_EQ(crossing_rate(t, kids[0]), 0.5);
  EXPECT_THROW(crossing_rate(t, t.root()), std::invalid_argument);
  EXPECT_THROW(crossing_rate(t, 99), std::out_of_range);
}

TEST(CrossingRate, MatchesDoubleSumAndNeverExceedsOne) {
  RandomStream rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const BinaryTree t = sample_yule_tree(2.5, rng);
    const auto leaves = t.leaves();
    for (NodeId c = 1; c < t.size(); ++c) {
      double brute = 0.0;
      for (NodeId x : leaves) {
        if (!below(t, x, c)) continue;
        for (NodeId y : leaves) {
          if (below(t, y, c)) continue;
          brute += std::ldexp(1.0, 1 - static_cast<int>(tree_distance(t, x, y)));
        }
      }
      const double z = crossing_rate(t, c);
      EXPECT_NEAR(z, brute, 1e-12);
      EXPECT_LE(z, 1.0);
    }
  }
}

TEST(Canopy, Examples) {
  EXPECT_EQ(canopy_distance(0, 1), 2u);
  EXPECT_EQ(canopy_distance(0, 2), 4u);
  EXPECT_EQ(canopy_distance(0, 3), 4u);
  EXPECT_EQ(canopy_distance(5, 5), 0u);
}

TEST(Canopy, MatchesExplicitTree) {
  const BinaryTree t = BinaryTree::complete(6);
  const auto leaves = t.leaves();
  ASSERT_EQ(leaves.size(), 64u);
  for (std::uint64_t i = 0; i < 64; ++i) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      EXPECT_EQ(canopy_distance(i, j), tree_distance(t, leaves[i], leaves[j]));
    }
  }
}

TEST(Canopy, IsAMetric) {
  for (std::uint64_t i = 0; i < 64; ++i) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      EXPECT_EQ(canopy_distance(i, j), canopy_distance(j, i));
      EXPECT_EQ(canopy_distance(i, j) == 0, i == j);
      for (std::uint64_t k = 0; k < 64; ++k) {
        EXPECT_LE(canopy_distance(i, k), canopy_distance(i, j) + canopy_distance(j, k));
      }
    }
  }
}

TEST(Canopy, WeightSumApproachesOne) {
  double sum = 0.0;
  for (std::uint64_t x = 1; x < (1u << 20); ++x) {
    sum += std::ldexp(1.0, 1 - static_cast<int>(canopy_distance(0, x)));
  }
  EXPECT_LT(sum, 1.0);
  EXPECT_NEAR(sum, 1.0, 1e-5);
}

TEST(Spine, ExtensionsGrowAges) {
  RandomStream rng(8);
  SpineState s;
  for (int k = 0; k < 5; ++k) s = extend_spine(std::move(s), rng);
  EXPECT_EQ(s.length(), 5u);
  for (std::size_t i = 1; i < s.ages().size(); ++i) EXPECT_GT(s.ages()[i], s.ages()[i - 1]);
  EXPECT_THROW(s.extend_with_label(0.0, rng, 100), std::invalid_argument);
}

TEST(Spine, MeanAgeIsIndex) {
  RandomStream rng(9);
  MeanAccumulator acc;
  for (int r = 0; r < 10000; ++r) {
    SpineState s;
    for (int k = 0; k < 3; ++k) s = extend_spine(std::move(s), rng, 1000000);
    acc.add(s.ages()[2]);
  }
  EXPECT_NEAR(acc.mean(), 3.0, 3 * acc.estimate().stderr_);
}

TEST(Spine, Distances) {
  RandomStream rng(10);
  SpineState s;
  s.extend_with_label(0.5, rng, 100);
  s.extend_with_label(0.5, rng, 100);
  s.extend_with_label(0.5, rng, 100);
  const NodeId w = 0;  // root of each subtree
  EXPECT_EQ(spine_distance(s, {0, 0}, {0, 0}), 0u);
  // v_0 to w_n: n - 1 spine edges plus the hanging edge plus one step onto the spine.
  EXPECT_EQ(spine_distance(s, {0, 0}, {1, w}), 2u);
  EXPECT_EQ(spine_distance(s, {0, 0}, {3, w}), 4u);
  EXPECT_EQ(spine_distance(s, {1, w}, {3, w}), 4u);
  EXPECT_EQ(spine_distance(s, {3, w}, {1, w}), 4u);
}

TEST(ForwardWalk, BalancedTreeUniform) {
  const BinaryTree t = BinaryTree::complete(2);
  RandomStream rng(11);
  std::map<NodeId, int> freq;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++freq[forward_walk_leaf(t, rng)];
  ASSERT_EQ(freq.size(), 4u);
  const double se = std::sqrt(0.25 * 0.75 / n);
  for (const auto& [leaf, c] : freq) EXPECT_NEAR(c / double(n), 0.25, 3 * se);
}

TEST(ForwardWalk, MatchesDyadicWeights) {
  RandomStream rng(12);
  const BinaryTree t = sample_yule_tree(2.0, rng);
  IntDistribution d;
  const auto leaves = t.leaves();
  std::map<NodeId, std::int64_t> index;
  for (std::size_t i = 0; i < leaves.size(); ++i) index[leaves[i]] = static_cast<std::int64_t>(i);
  for (int i = 0; i < 100000; ++i) d.add(index[forward_walk_leaf(t, rng)]);
  const FitResult fit = fit_discrete(
      d,
      [&](std::int64_t k) {
        if (k < 0 || k >= static_cast<std::int64_t>(leaves.size())) return 0.0;
        return std::ldexp(1.0, -static_cast<int>(t.depth(leaves[static_cast<std::size_t>(k)])));
      },
      0, 0);
  EXPECT_GT(fit.p_value, 0.01);
}

}  // namespace
}  // namespace vsplit

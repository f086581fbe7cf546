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

#include "vsplit/processes.hpp"

#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "vsplit/canonical.hpp"
#include "vsplit/stats.hpp"

namespace vsplit {
namespace {

RootedMultigraph pair_graph(std::uint32_t k) {
  const std::vector<VertexId> vs{0, 1};
  std::vector<Edge> es;
  if (k > 0) es.push_back({0, 1, k});
  return RootedMultigraph::from_parts(0, vs, es);
}

TEST(FullProcess, ZeroTimeReturnsInput) {
  RandomStream rng(1);
  const RootedMultigraph g = pair_graph(3);
  EXPECT_EQ(run_full_process(g, 1.0, 0.0, rng).graph(), g);
  EXPECT_EQ(run_cluster_process(create_single(), 1.0, 0.0, rng), create_single());
}

TEST(FullProcess, RejectsBadArguments) {
  RandomStream rng(1);
  EXPECT_THROW(run_full_process(create_single(), 1.0, -1.0, rng), std::invalid_argument);
  EXPECT_THROW(run_full_process(create_single(), -1.0, 1.0, rng), std::invalid_argument);
}

TEST(FullProcess, CapIsAnError) {
  RandomStream rng(2);
  ProcessOptions opts;
  opts.max_vertices = 100;
  try {
    run_full_process(create_single(), 1.0, 20.0, rng, opts);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    ASSERT_TRUE(e.partial());
    EXPECT_GE(e.partial()->graph().vertex_count(), 100u);
  }
}

TEST(FullProcess, SizeIsGeometric) {
  RandomStream rng(3);
  IntDistribution d;
  std::uint64_t singles = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const std::size_t size = run_full_process(create_single(), 1.0, 1.0, rng).graph().vertex_count();
    d.add(static_cast<std::int64_t>(size));
    singles += size == 1 ? 1 : 0;
  }
  EXPECT_GT(fit_geometric(d, std::exp(-1.0)).p_value, 0.01);
  const double p = std::exp(-1.0);
  EXPECT_NEAR(singles / double(n), p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(FullProcess, MeanSizeAtLogTwo) {
  RandomStream rng(4);
  MeanAccumulator acc;
  for (int i = 0; i < 100000; ++i) {
    acc.add(static_cast<double>(
        run_full_process(create_single(), 1.0, std::log(2.0), rng).graph().vertex_count()));
  }
  EXPECT_NEAR(acc.mean(), 2.0, 3 * acc.estimate().stderr_);
}

TEST(FullProcess, GenealogyTracksVertices) {
  RandomStream rng(5);
  ProcessOptions opts;
  opts.track_genealogy = true;
  const FullProcessState s = run_full_process(create_single(), 1.0, 2.0, rng, opts);
  ASSERT_TRUE(s.genealogy());
  EXPECT_EQ(s.genealogy()->leaf_count(), s.graph().vertex_count());
  for (VertexId v : s.graph().vertices()) EXPECT_TRUE(s.genealogy()->is_leaf(s.genealogy_node(v)));
}

// Exact law of the root component from one vertex over outcomes with at most
// two splits. Leaf counts of the genealogy are Geo(e^{-t}) and the shape of
// each outcome does not depend on when the splits happened.
std::map<CanonicalCode, double> two_split_law(double lambda, double t) {
  std::map<CanonicalCode, double> law;
  const double q = std::exp(-t);
  const double p_one = q;
  const double p_two = q * (1 - q);
  const double p_three = q * (1 - q) * (1 - q);
  auto po = [&](int k) { return poisson_pmf(lambda / 2, k); };
  auto binom = [](int k, int j) { return std::exp(std::lgamma(k + 1) - std::lgamma(j + 1) - std::lgamma(k - j + 1) - k * std::log(2.0)); };
  auto add = [&](VertexId root, std::vector<Edge> es, double w) {
    std::vector<VertexId> vs;
    std::vector<Edge> kept;
    for (const Edge& e : es) {
      if (e.multiplicity > 0) kept.push_back(e);
    }
    const VertexId n = es.empty() ? 1 : (es.size() == 1 ? 2 : 3);
    for (VertexId v = 0; v < n; ++v) vs.push_back(v);
    law[canonical_form(root_component(RootedMultigraph::from_parts(root, vs, kept)))] += w;
  };
  add(0, {}, p_one);
  const int kmax = 25;
  for (int k = 0; k < kmax; ++k) {
    add(0, {{0, 1, static_cast<std::uint32_t>(k)}}, p_two * po(k));
    for (int j = 0; j <= k; ++j) {
      for (int m = 0; m < kmax; ++m) {
        const double w = p_three * po(k) * binom(k, j) * po(m);
        const auto uj = static_cast<std::uint32_t>(j);
        const auto ur = static_cast<std::uint32_t>(k - j);
        const auto um = static_cast<std::uint32_t>(m);
        // Vertices 0, 1 are the offspring of the second split, 2 the other.
        // The root is an offspring of the second split, or the other vertex.
        add(0, {{0, 1, um}, {0, 2, uj}, {1, 2, ur}}, w / 2);
        add(2, {{0, 1, um}, {0, 2, uj}, {1, 2, ur}}, w / 2);
      }
    }
  }
  return law;
}

TEST(ClusterProcess, MatchesTwoSplitEnumeration) {
  const double lambda = 1.0;
  const double t = 0.1;
  const double residual = std::pow(1 - std::exp(-t), 3);
  const auto law = two_split_law(lambda, t);
  RandomStream rng(6);
  const int n = 100000;
  std::map<CanonicalCode, int> freq;
  for (int i = 0; i < n; ++i) ++freq[canonical_form(run_cluster_process(create_single(), lambda, t, rng))];
  for (const auto& [code, p] : law) {
    if (p < 1e-4) continue;
    const double f = freq[code] / double(n);
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_GE(f, p - 4 * se - 1e-12);
    EXPECT_LE(f, p + residual + 4 * se);
  }
}

TEST(ClusterProcess, LazyPruningMatchesEndOnly) {
  RandomStream a(7);
  RandomStream b(8);
  CodeDistribution lazy;
  CodeDistribution end_only;
  for (int i = 0; i < 100000; ++i) {
    lazy.add(canonical_form(run_cluster_process(create_single(), 1.0, 2.0, a, {}, PruningPolicy::kLazy)));
    end_only.add(canonical_form(
        run_cluster_process(create_single(), 1.0, 2.0, b, {}, PruningPolicy::kEndOnly)));
  }
  RandomStream boot(9);
  const NoiseFloor floor = tv_noise_floor(lazy, end_only, boot);
  EXPECT_LT(tv_distance(lazy, end_only), 0.02 + floor.quantile_value);
}

TEST(ClusterProcess, ResultIsConnectedAndRooted) {
  RandomStream rng(10);
  for (int i = 0; i < 500; ++i) {
    const RootedMultigraph g = run_cluster_process(create_single(), 1.5, 3.0, rng);
    EXPECT_TRUE(is_connected(g));
    EXPECT_TRUE(g.contains(g.root()));
  }
}

TEST(ClusterProcess, RequiresConnectedStart) {
  RandomStream rng(11);
  const std::vector<VertexId> vs{0, 1};
  const auto g = RootedMultigraph::from_parts(0, vs, std::vector<Edge>{});
  EXPECT_THROW(run_cluster_process(g, 1.0, 1.0, rng), std::invalid_argument);
}

TEST(ClusterProcess, SnapshotsAgreeWithSingleRuns) {
  RandomStream a(12);
  RandomStream b(12);
  const auto snaps = run_cluster_snapshots(create_single(), 1.0, {0.0, 0.5, 1.5}, a);
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_EQ(snaps[0], create_single());
  for (const auto& g : snaps) EXPECT_TRUE(is_connected(g));
  EXPECT_THROW(run_cluster_snapshots(create_single(), 1.0, {1.0, 0.5}, b), std::invalid_argument);
}

TEST(GtcircViaTree, ZeroTimeAndSmallLambda) {
  RandomStream rng(13);
  EXPECT_EQ(sample_gtcirc_via_tree(1.0, 0.0, rng).vertex_count(), 1u);
  int singles = 0;
  for (int i = 0; i < 10000; ++i) {
    const RootedMultigraph g = sample_gtcirc_via_tree(0.01, 1.0, rng);
    EXPECT_TRUE(is_connected(g));
    singles += g.vertex_count() == 1 ? 1 : 0;
  }
  EXPECT_GE(singles, 9800);
}

TEST(GtcircViaTree, MatchesEventDrivenAtShortTimes) {
  RandomStream a(14);
  RandomStream b(15);
  CodeDistribution tree;
  CodeDistribution events;
  for (int i = 0; i < 50000; ++i) {
    tree.add(canonical_form(sample_gtcirc_via_tree(1.0, 0.5, a)));
    events.add(canonical_form(run_cluster_process(create_single(), 1.0, 0.5, b)));
  }
  RandomStream boot(16);
  const NoiseFloor floor = tv_noise_floor(tree, events, boot);
  EXPECT_LT(tv_distance(tree, events), 0.02 + floor.quantile_value);
}

// Distribution of the chain after `steps` steps from x0, by repeated
// application of the exact transition kernel on states 0..cap.
std::vector<double> chain_law(double lambda, std::size_t x0, std::size_t steps, std::size_t cap) {
  std::vector<double> p(cap + 1, 0.0);
  p[x0] = 1.0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<double> thinned(cap + 1, 0.0);
    for (std::size_t x = 0; x <= cap; ++x) {
      for (std::size_t j = 0; j <= x; ++j) {
        thinned[j] += p[x] * std::exp(std::lgamma(x + 1.0) - std::lgamma(j + 1.0) -
                                      std::lgamma(x - j + 1.0) - x * std::log(2.0));
      }
    }
    std::vector<double> next(cap + 1, 0.0);
    for (std::size_t j = 0; j <= cap; ++j) {
      for (std::size_t f = 0; j + f <= cap; ++f) {
        next[j + f] += thinned[j] * poisson_pmf(lambda / 2, static_cast<std::int64_t>(f));
      }
    }
    p = next;
  }
  return p;
}

TEST(DegreeChain, ThinningOnlyIsAbsorbedAtZero) {
  RandomStream rng(17);
  const auto path = simulate_degree_chain(0.0, 50, 200, rng);
  ASSERT_EQ(path.size(), 201u);
  EXPECT_EQ(path.front(), 50u);
  EXPECT_EQ(path.back(), 0u);
  for (std::size_t i = 1; i < path.size(); ++i) EXPECT_LE(path[i], path[i - 1]);
}

TEST(DegreeChain, MatchesTransitionKernel) {
  const auto law = chain_law(2.0, 10, 3, 60);
  RandomStream rng(18);
  IntDistribution d;
  for (int i = 0; i < 100000; ++i) d.add(static_cast<std::int64_t>(simulate_degree_chain(2.0, 10, 3, rng).back()));
  const FitResult fit = fit_discrete(
      d, [&](std::int64_t k) { return k >= 0 && k <= 60 ? law[static_cast<std::size_t>(k)] : 0.0; },
      0);
  EXPECT_GT(fit.p_value, 0.01);
}

TEST(DegreeChain, PoissonIsStationary) {
  const auto law = chain_law(2.0, 0, 100, 60);
  double tv = 0.0;
  for (std::size_t k = 0; k <= 60; ++k) tv += std::abs(law[k] - poisson_pmf(2.0, static_cast<std::int64_t>(k)));
  EXPECT_LT(tv / 2, 1e-8);
}

TEST(KillTime, NoOldEdgesMeansKilledAtZero) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream rng(seed);
    const KillResult r = kill_time_all_old_edges(1.0, rng, 10.0);
    if (r.old_edges == 0) {
      EXPECT_TRUE(r.killed);
      EXPECT_EQ(r.time, 0.0);
      return;
    }
  }
  FAIL() << "no run without old edges";
}

TEST(KillTime, ReducedMatchesFullProcess) {
  RandomStream a(19);
  RandomStream b(20);
  const int n = 3000;
  const double cap = 3.0;
  std::vector<double> reduced;
  std::vector<double> full;
  int killed_reduced = 0;
  int killed_full = 0;
  for (int i = 0; i < n; ++i) {
    const KillResult r = kill_time_all_old_edges(1.0, a, cap);
    const KillResult f = kill_time_full_process(1.0, b, cap);
    reduced.push_back(r.time);
    full.push_back(f.time);
    killed_reduced += r.killed ? 1 : 0;
    killed_full += f.killed ? 1 : 0;
  }
  const double p = (killed_reduced + killed_full) / (2.0 * n);
  const double se = std::sqrt(2 * p * (1 - p) / n);
  EXPECT_NEAR(killed_reduced / double(n) - killed_full / double(n), 0.0, 4 * se);
  EXPECT_GT(mann_whitney(reduced, full).p_value, 0.001);
}

TEST(SingletonFree, ZeroTimeKeepsStart) {
  RandomStream rng(21);
  EXPECT_EQ(run_singleton_free(1.0, 0.0, rng), 1u);
  EXPECT_THROW(run_singleton_free(0.0, 1.0, rng), std::invalid_argument);
}

TEST(SingletonFree, MeanBelowYuleBound) {
  RandomStream rng(22);
  MeanAccumulator acc;
  for (int i = 0; i < 20000; ++i) acc.add(static_cast<double>(run_singleton_free(1.0, 3.0, rng)));
  EXPECT_LE(acc.mean() - 3 * acc.estimate().stderr_, std::exp((1 - std::exp(-1.0)) * 3.0));
}

}  // namespace
}  // namespace vsplit

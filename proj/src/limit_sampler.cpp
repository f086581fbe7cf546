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

#include "vsplit/limit_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>
#include <unordered_map>

#include "vsplit/lazy_tree.hpp"
#include "vsplit/stats.hpp"

namespace vsplit {

namespace {

// Leaf of the spine tree; subtree 0 is v_0.
struct LeafRef {
  std::uint32_t subtree;
  NodeId node;

  std::uint64_t key() const { return (static_cast<std::uint64_t>(subtree) << 32) | node; }
};

enum class SubtreeKind { kYule, kComplete };

// One exploration of the spine tree. Stubs are crossing edges whose far end
// is still unrevealed; after step n all of them sit at cut v_n v_{n+1}.
class Revealer {
 public:
  Revealer(double lambda, SubtreeKind kind, const std::vector<double>& forced,
           double first_free_shift, SamplerCaps caps, RandomStream& rng)
      : lambda_(lambda),
        kind_(kind),
        forced_(forced),
        shift_(first_free_shift),
        caps_(caps),
        rng_(rng) {}

  LimitSample run() {
    reveal_crossing_edges();
    LimitSample out{explore_component(), std::move(diag_)};
    out.diagnostics.component_size = out.graph.vertex_count();
    return out;
  }

 private:
  void reveal_crossing_edges() {
    // v_0's edges all cross cut 0 and their total rate is lambda, since the
    // forward walk from v_1 terminates almost surely.
    stubs_.assign(rng_.poisson(lambda_), LeafRef{0, 0});
    diag_.stub_counts.push_back(stubs_.size());
    while (!stubs_.empty()) {
      const std::size_t n = subtrees_.size() + 1;
      if (n > caps_.max_spine) fail("spine cap exceeded");
      add_subtree(n);
      LazySubtree& tree = subtrees_.back();
      const auto index = static_cast<std::uint32_t>(n);

      std::vector<LeafRef> waiting;
      waiting.reserve(stubs_.size());
      for (const LeafRef& origin : stubs_) {
        if (rng_.coin()) {
          const LeafRef far{index, tree.forward_walk(tree.root(), rng_)};
          cross_.push_back({origin, far});
        } else {
          waiting.push_back(origin);
        }
      }
      // Leaves x of T_n send Po(lambda 2^{-d(x, v_n)}) edges past cut n. The
      // weights sum to 1/2 and are proportional to the forward walk law.
      const std::uint64_t fresh = rng_.poisson(lambda_ / 2.0);
      for (std::uint64_t i = 0; i < fresh; ++i) {
        waiting.push_back({index, tree.forward_walk(tree.root(), rng_)});
      }
      stubs_ = std::move(waiting);
      diag_.stub_counts.push_back(stubs_.size());
      diag_.fresh_stubs.push_back(fresh);
      count_revealed();
    }
    diag_.spine_length = subtrees_.size();
    diag_.revelation_rounds = revelation_rounds();
  }

  void add_subtree(std::size_t n) {
    if (kind_ == SubtreeKind::kComplete) {
      subtrees_.push_back(LazySubtree::complete(static_cast<std::uint32_t>(n - 1)));
      return;
    }
    double label;
    if (n <= forced_.size()) {
      label = forced_[n - 1];
    } else {
      label = rng_.exponential(1.0);
      if (n == forced_.size() + 1) label += shift_;
    }
    age_ += label;
    subtrees_.push_back(LazySubtree::yule(age_, rng_));
  }

  void count_revealed() {
    std::size_t total = 1;
    for (const LazySubtree& t : subtrees_) total += t.materialized();
    diag_.revealed_nodes = total;
    if (total > caps_.max_revealed) fail("revealed-node cap exceeded");
  }

  std::size_t revelation_rounds() const {
    std::size_t cut = 0;
    std::size_t rounds = 1;
    for (;;) {
      std::size_t farthest = cut;
      for (const auto& [a, b] : cross_) {
        if (a.subtree <= cut && b.subtree > cut) farthest = std::max<std::size_t>(farthest, b.subtree);
      }
      if (farthest == cut) return rounds;
      cut = farthest;
      ++rounds;
    }
  }

  // Walk from leaf `from` of subtree `tree` that first steps to the parent and
  // then keeps increasing its distance. Returns kNoNode when it leaves the
  // subtree through its root (those edges are stubs).
  NodeId intra_walk(LazySubtree& tree, NodeId from) {
    NodeId cur = from;
    for (;;) {
      const NodeId parent = tree.parent(cur);
      if (parent == kNoNode) return kNoNode;
      if (rng_.coin()) return tree.forward_walk(tree.sibling(cur, rng_), rng_);
      cur = parent;
    }
  }

  RootedMultigraph explore_component() {
    std::unordered_map<std::uint64_t, std::vector<LeafRef>> cross_adj;
    for (const auto& [a, b] : cross_) {
      cross_adj[a.key()].push_back(b);
      cross_adj[b.key()].push_back(a);
    }

    std::unordered_map<std::uint64_t, VertexId> local;
    std::vector<LeafRef> order;
    std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
    auto discover = [&](const LeafRef& x) {
      auto [it, inserted] = local.emplace(x.key(), static_cast<VertexId>(order.size()));
      if (inserted) order.push_back(x);
      return it->second;
    };
    auto add_edge = [&](VertexId a, VertexId b) {
      if (a > b) std::swap(a, b);
      ++multiplicity[(static_cast<std::uint64_t>(a) << 32) | b];
    };

    discover(LeafRef{0, 0});
    for (VertexId u = 0; u < order.size(); ++u) {
      const LeafRef x = order[u];
      // Vertices with index < u are explored; their edges to x are recorded.
      if (auto it = cross_adj.find(x.key()); it != cross_adj.end()) {
        for (const LeafRef& y : it->second) {
          const VertexId w = discover(y);
          if (w >= u) add_edge(u, w);
        }
      }
      if (x.subtree == 0) continue;
      LazySubtree& tree = subtrees_[x.subtree - 1];
      const std::uint64_t walks = rng_.poisson(lambda_);
      for (std::uint64_t i = 0; i < walks; ++i) {
        const NodeId target = intra_walk(tree, x.node);
        if (target == kNoNode) continue;
        const VertexId w = discover({x.subtree, target});
        if (w > u) add_edge(u, w);
      }
      diag_.component_reach = std::max<std::size_t>(diag_.component_reach, x.subtree);
      if ((u & 1023) == 1023) count_revealed();
    }
    count_revealed();

    std::vector<VertexId> ids(order.size());
    for (VertexId i = 0; i < ids.size(); ++i) ids[i] = i;
    std::vector<Edge> edges;
    edges.reserve(multiplicity.size());
    for (const auto& [key, m] : multiplicity) {
      edges.push_back({static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu), m});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return RootedMultigraph::from_parts(0, ids, edges);
  }

  [[noreturn]] void fail(const char* what) {
    diag_.spine_length = subtrees_.size();
    throw SamplerCapExceeded(what, diag_);
  }

  double lambda_;
  SubtreeKind kind_;
  const std::vector<double>& forced_;
  double shift_;
  SamplerCaps caps_;
  RandomStream& rng_;

  double age_ = 0.0;
  std::vector<LazySubtree> subtrees_;
  std::vector<LeafRef> stubs_;
  std::vector<std::pair<LeafRef, LeafRef>> cross_;
  SamplerDiagnostics diag_;
};

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

}  // namespace

LimitSample sample_m_lambda_with_labels(double lambda, const std::vector<double>& forced_labels,
                                        double first_free_shift, RandomStream& rng,
                                        SamplerCaps caps) {
  check_lambda(lambda);
  for (double s : forced_labels) {
    if (!(s >= 0.0)) throw std::invalid_argument("forced labels must be non-negative");
  }
  return Revealer(lambda, SubtreeKind::kYule, forced_labels, first_free_shift, caps, rng).run();
}

LimitSample sample_m_lambda(double lambda, RandomStream& rng, SamplerCaps caps) {
  return sample_m_lambda_with_labels(lambda, {}, 0.0, rng, caps);
}

LimitSample sample_m_lambda_with_prefix(double lambda, double t, RandomStream& rng,
                                        SamplerCaps caps) {
  check_lambda(lambda);
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const std::uint64_t k = rng.poisson(t);
  std::vector<double> points(k);
  for (double& p : points) p = t * rng.uniform();
  std::sort(points.begin(), points.end(), std::greater<>());
  std::vector<double> labels;
  labels.reserve(k);
  double previous = t;
  for (double p : points) {
    labels.push_back(previous - p);
    previous = p;
  }
  const double shift = k == 0 ? t : points.back();
  return sample_m_lambda_with_labels(lambda, labels, shift, rng, caps);
}

LimitSample sample_g_lambda(double lambda, RandomStream& rng, SamplerCaps caps) {
  check_lambda(lambda);
  static const std::vector<double> kNoLabels;
  return Revealer(lambda, SubtreeKind::kComplete, kNoLabels, 0.0, caps, rng).run();
}

RootedMultigraph evolve(const RootedMultigraph& m, double lambda, double t, RandomStream& rng,
                        ProcessOptions opts) {
  return run_cluster_process(m, lambda, t, rng, opts);
}

std::optional<bool> root_double_edge(const RootedMultigraph& g) {
  if (g.degree(g.root()) != 2) return std::nullopt;
  return g.bundles(g.root()).size() == 1;
}

DoubleEdgeStat double_edge_stat(LimitModel model, double lambda, std::uint64_t n,
                                RandomStream& rng, std::uint64_t budget, double z) {
  if (n == 0) throw std::invalid_argument("double_edge_stat: n must be positive");
  if (budget == 0) budget = 1000 * n;
  DoubleEdgeStat s;
  while (s.conditional < n) {
    if (s.drawn >= budget) throw std::runtime_error("double_edge_stat: sample budget exhausted");
    ++s.drawn;
    const LimitSample x =
        model == LimitModel::kM ? sample_m_lambda(lambda, rng) : sample_g_lambda(lambda, rng);
    if (auto hit = root_double_edge(x.graph)) {
      ++s.conditional;
      s.hits += *hit ? 1 : 0;
    }
  }
  s.frequency = static_cast<double>(s.hits) / static_cast<double>(s.conditional);
  s.stderr_ = std::sqrt(s.frequency * (1.0 - s.frequency) / static_cast<double>(s.conditional));
  std::tie(s.ci_lo, s.ci_hi) = wilson_ci(s.hits, s.conditional, z);
  return s;
}

}  // namespace vsplit

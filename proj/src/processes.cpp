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

#include <algorithm>
#include <cmath>
#include <limits>

namespace vsplit {

FullProcessState::FullProcessState(RootedMultigraph init, double lambda, RandomStream& rng,
                                   ProcessOptions opts)
    : graph_(std::move(init)), lambda_(lambda), opts_(opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (opts_.tag_old_new) graph_.enable_tagging(true);
  if (opts_.track_genealogy) {
    if (graph_.vertex_count() != 1) {
      throw std::invalid_argument("genealogy tracking needs a single-vertex start");
    }
    genealogy_.emplace();
    node_of_.assign(graph_.next_id(), kNoNode);
    node_of_[graph_.root()] = genealogy_->root();
  }
  for (VertexId v : graph_.vertices()) schedule(v, rng);
}

void FullProcessState::schedule(VertexId v, RandomStream& rng) {
  queue_.push({clock_ + rng.exponential(1.0), v});
}

void FullProcessState::skip_stale() {
  while (!queue_.empty() && !graph_.contains(queue_.top().vertex)) queue_.pop();
}

double FullProcessState::next_event_time() {
  skip_stale();
  return queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.top().time;
}

std::optional<SplitOutcome> FullProcessState::step(double t_end, RandomStream& rng) {
  if (next_event_time() > t_end) {
    clock_ = std::max(clock_, t_end);
    return std::nullopt;
  }
  const Event ev = queue_.top();
  queue_.pop();
  clock_ = ev.time;
  SplitOutcome out = graph_.split(ev.vertex, lambda_, rng);
  ++splits_;
  schedule(out.first, rng);
  schedule(out.second, rng);
  if (genealogy_) {
    auto kids = genealogy_->split_leaf(node_of_.at(ev.vertex), clock_);
    node_of_.resize(graph_.next_id(), kNoNode);
    node_of_[out.first] = kids[0];
    node_of_[out.second] = kids[1];
  }
  if (graph_.vertex_count() > opts_.max_vertices) {
    throw CapExceeded("vertex cap of " + std::to_string(opts_.max_vertices) +
                          " exceeded at t=" + std::to_string(clock_),
                      std::make_shared<FullProcessState>(*this));
  }
  return out;
}

void FullProcessState::advance_to(double t_end, RandomStream& rng) {
  while (step(t_end, rng)) {
  }
}

void FullProcessState::prune_to_root_component() {
  graph_ = root_component(graph_);
}

FullProcessState run_full_process(const RootedMultigraph& init, double lambda, double t_end,
                                  RandomStream& rng, ProcessOptions opts) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  FullProcessState state(init, lambda, rng, opts);
  state.advance_to(t_end, rng);
  return state;
}

namespace {

void run_pruned(FullProcessState& state, double t_end, RandomStream& rng, PruningPolicy policy,
                std::size_t& reference) {
  while (state.step(t_end, rng)) {
    if (policy != PruningPolicy::kLazy) continue;
    if (state.graph().vertex_count() <= 2 * reference) continue;
    const std::size_t component = root_component_size(state.graph());
    if (state.graph().vertex_count() > 2 * component) state.prune_to_root_component();
    reference = component;
  }
}

}  // namespace

RootedMultigraph run_cluster_process(const RootedMultigraph& init, double lambda, double t_end,
                                     RandomStream& rng, ProcessOptions opts,
                                     PruningPolicy policy) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  if (!is_connected(init)) throw std::invalid_argument("cluster process needs a connected start");
  FullProcessState state(init, lambda, rng, opts);
  std::size_t reference = init.vertex_count();
  run_pruned(state, t_end, rng, policy, reference);
  return root_component(state.graph());
}

std::vector<RootedMultigraph> run_cluster_snapshots(const RootedMultigraph& init, double lambda,
                                                    const std::vector<double>& times,
                                                    RandomStream& rng, ProcessOptions opts) {
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && !(times[0] >= 0.0))) {
    throw std::invalid_argument("snapshot times must be non-negative and sorted");
  }
  if (!is_connected(init)) throw std::invalid_argument("cluster process needs a connected start");
  FullProcessState state(init, lambda, rng, opts);
  std::size_t reference = init.vertex_count();
  std::vector<RootedMultigraph> out;
  out.reserve(times.size());
  for (double t : times) {
    run_pruned(state, t, rng, PruningPolicy::kLazy, reference);
    out.push_back(root_component(state.graph()));
  }
  return out;
}

RootedMultigraph sample_gtcirc_via_tree(double lambda, double t, RandomStream& rng,
                                        std::size_t max_vertices) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  BinaryTree tree;
  try {
    tree = sample_yule_tree(t, rng, max_vertices);
  } catch (const std::length_error&) {
    throw CapExceeded("genealogical tree exceeds vertex cap");
  }
  const NodeId root_leaf = forward_walk_leaf(tree, rng);
  const std::vector<NodeId> leaves = tree.leaves();
  const auto n = static_cast<VertexId>(leaves.size());

  std::vector<VertexId> ids(n);
  VertexId root = 0;
  for (VertexId i = 0; i < n; ++i) {
    ids[i] = i;
    if (leaves[i] == root_leaf) root = i;
  }
  std::vector<Edge> edges;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      const std::uint32_t d = tree_distance(tree, leaves[i], leaves[j]);
      const std::uint64_t m = rng.poisson(std::ldexp(lambda, 1 - static_cast<int>(d)));
      if (m > 0) edges.push_back({i, j, static_cast<std::uint32_t>(m)});
    }
  }
  return root_component(RootedMultigraph::from_parts(root, ids, edges));
}

std::uint64_t run_singleton_free(double lambda, double t_end, RandomStream& rng,
                                 std::size_t max_vertices) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  // Tokens are modelled as edges to an anchor vertex (id 0) that never
  // splits: they are inherited by fair coins exactly like edges, and a vertex
  // is isolated and token-free iff its degree is zero.
  RootedMultigraph g;
  const VertexId anchor = g.root();
  const VertexId start = g.add_vertex();
  g.add_edges(anchor, start, static_cast<std::uint32_t>(rng.poisson(lambda / 2.0)));

  struct Event {
    double time;
    VertexId vertex;
    bool operator>(const Event& o) const {
      return time != o.time ? time > o.time : vertex > o.vertex;
    }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  queue.push({rng.exponential(1.0), start});
  while (!queue.empty() && queue.top().time <= t_end) {
    const Event ev = queue.top();
    queue.pop();
    SplitOutcome out = g.split(ev.vertex, lambda, rng);
    for (VertexId child : {out.first, out.second}) {
      if (g.degree(child) == 0) {
        g.remove_vertex(child);
      } else {
        queue.push({ev.time + rng.exponential(1.0), child});
      }
    }
    if (g.vertex_count() - 1 > max_vertices) throw CapExceeded("singleton-free cap exceeded");
  }
  return g.vertex_count() - 1;
}

std::vector<std::uint64_t> simulate_degree_chain(double lambda, std::uint64_t x0,
                                                 std::size_t steps, RandomStream& rng) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  std::vector<std::uint64_t> path;
  path.reserve(steps + 1);
  path.push_back(x0);
  for (std::size_t k = 0; k < steps; ++k) {
    path.push_back(rng.binomial_half(path.back()) + rng.poisson(lambda / 2.0));
  }
  return path;
}

KillResult kill_time_all_old_edges(double lambda, RandomStream& rng, double time_cap) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(time_cap > 0.0)) throw std::invalid_argument("time_cap must be positive");
  const std::uint64_t n_old = rng.poisson(lambda / 2.0);
  if (n_old == 0) return {true, 0.0, 0};

  // A lineage is a left-side vertex that still carries unkilled old edges.
  // Its count of new edges changes only when it splits itself: neighbours'
  // splits reroute edges without detaching them.
  struct Lineage {
    double split_time;
    std::uint64_t old_edges;
    std::uint64_t new_edges;
    bool root;
  };
  std::vector<Lineage> live{{rng.exponential(1.0), n_old, 0, true}};
  while (!live.empty()) {
    auto it = std::min_element(live.begin(), live.end(), [](const Lineage& a, const Lineage& b) {
      return a.split_time < b.split_time;
    });
    const Lineage parent = *it;
    live.erase(it);
    const double now = parent.split_time;
    if (now > time_cap) return {false, time_cap, n_old};

    const std::uint64_t old_first = rng.binomial_half(parent.old_edges);
    const std::uint64_t new_first = rng.binomial_half(parent.new_edges);
    const std::uint64_t fresh = rng.poisson(lambda / 2.0);
    const bool root_first = parent.root && rng.coin();
    const bool root_second = parent.root && !root_first;
    Lineage kids[2] = {
        {0.0, old_first, new_first + fresh, root_first},
        {0.0, parent.old_edges - old_first, parent.new_edges - new_first + fresh, root_second},
    };
    for (Lineage& k : kids) {
      if (k.old_edges == 0) continue;
      if (!k.root && k.new_edges == 0) continue;  // killed
      k.split_time = now + rng.exponential(1.0);
      live.push_back(k);
    }
    if (live.empty()) return {true, now, n_old};
  }
  return {true, 0.0, n_old};
}

KillResult kill_time_full_process(double lambda, RandomStream& rng, double time_cap,
                                  std::size_t max_vertices) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(time_cap > 0.0)) throw std::invalid_argument("time_cap must be positive");
  const std::uint64_t n_old = rng.poisson(lambda / 2.0);
  if (n_old == 0) return {true, 0.0, 0};

  RootedMultigraph g;  // vertex 0 = left endpoint and root
  const VertexId right = g.add_vertex();
  g.add_edges(g.root(), right, static_cast<std::uint32_t>(n_old));
  ProcessOptions opts;
  opts.max_vertices = max_vertices;
  opts.tag_old_new = true;
  FullProcessState state(g, lambda, rng, opts);

  std::vector<char> left{1, 0};
  std::vector<char> killed{0, 0};
  std::uint64_t unkilled = n_old;
  while (auto out = state.step(time_cap, rng)) {
    const RootedMultigraph& cur = state.graph();
    left.resize(cur.next_id(), 0);
    killed.resize(cur.next_id(), 0);
    for (VertexId child : {out->first, out->second}) {
      left[child] = left[out->parent];
      killed[child] = killed[out->parent];
      if (!left[child] || killed[child]) continue;
      const std::uint64_t old_here = cur.old_degree(child);
      if (old_here > 0 && cur.root() != child && cur.new_degree(child) == 0) {
        killed[child] = 1;
        unkilled -= old_here;
      }
    }
    if (unkilled == 0) return {true, state.clock(), n_old};
  }
  return {false, time_cap, n_old};
}

}  // namespace vsplit

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

#ifndef VSPLIT_PROCESSES_HPP_
#define VSPLIT_PROCESSES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "vsplit/genealogy.hpp"
#include "vsplit/multigraph.hpp"
#include "vsplit/random.hpp"

namespace vsplit {

inline constexpr std::size_t kDefaultMaxVertices = 10'000'000;

struct ProcessOptions {
  std::size_t max_vertices = kDefaultMaxVertices;
  // Grow the genealogical tree alongside the graph (single-vertex starts only).
  bool track_genealogy = false;
  // Tag the initial edges as old; edges created by splits are new.
  bool tag_old_new = false;
};

// State of the full process: the graph, the clock and one pending splitting
// time per living vertex.
class FullProcessState {
 public:
  // Schedules every vertex of `init` at clock 0 + Exp(1).
  FullProcessState(RootedMultigraph init, double lambda, RandomStream& rng,
                   ProcessOptions opts = {});

  const RootedMultigraph& graph() const { return graph_; }
  double clock() const { return clock_; }
  double lambda() const { return lambda_; }
  std::uint64_t splits() const { return splits_; }
  std::size_t pending_events() const { return queue_.size(); }

  // Time of the next split of a living vertex, or +inf when none is pending.
  double next_event_time();

  // Applies the next split if it happens at or before t_end; otherwise moves
  // the clock to t_end and returns std::nullopt. Throws CapExceeded when the
  // vertex count passes the cap.
  std::optional<SplitOutcome> step(double t_end, RandomStream& rng);

  // Runs until t_end.
  void advance_to(double t_end, RandomStream& rng);

  // Removes every vertex outside the root component. Pending events of
  // removed vertices are discarded lazily.
  void prune_to_root_component();

  const std::optional<BinaryTree>& genealogy() const { return genealogy_; }
  // Genealogy node of a living vertex.
  NodeId genealogy_node(VertexId v) const { return node_of_.at(v); }

 private:
  struct Event {
    double time;
    VertexId vertex;
    bool operator>(const Event& o) const {
      return time != o.time ? time > o.time : vertex > o.vertex;
    }
  };

  void schedule(VertexId v, RandomStream& rng);
  void skip_stale();

  RootedMultigraph graph_;
  double lambda_;
  double clock_ = 0.0;
  std::uint64_t splits_ = 0;
  ProcessOptions opts_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::optional<BinaryTree> genealogy_;
  std::vector<NodeId> node_of_;
};

// Thrown when a simulation passes its size cap. Carries the partial state so
// callers can report how far the run got.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::shared_ptr<const FullProcessState> partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::shared_ptr<const FullProcessState>& partial() const { return partial_; }

 private:
  std::shared_ptr<const FullProcessState> partial_;
};

FullProcessState run_full_process(const RootedMultigraph& init, double lambda, double t_end,
                                  RandomStream& rng, ProcessOptions opts = {});

enum class PruningPolicy {
  // Drop non-root components whenever |V| exceeds twice the root component,
  // and at the end.
  kLazy,
  // Only at the end; the reference behaviour.
  kEndOnly,
};

// Cluster process: the root component of the full process at t_end. `init`
// must be connected.
RootedMultigraph run_cluster_process(const RootedMultigraph& init, double lambda, double t_end,
                                     RandomStream& rng, ProcessOptions opts = {},
                                     PruningPolicy policy = PruningPolicy::kLazy);

// One cluster-process trajectory observed at each of the non-decreasing
// `times`.
std::vector<RootedMultigraph> run_cluster_snapshots(const RootedMultigraph& init, double lambda,
                                                    const std::vector<double>& times,
                                                    RandomStream& rng, ProcessOptions opts = {});

// Cluster process sampled through its genealogy: a Yule tree of age t, a root
// leaf chosen by a uniform forward walk, independent Po(2^{1-d(x,y)} lambda)
// bundles on all leaf pairs, and the root leaf's component.
RootedMultigraph sample_gtcirc_via_tree(double lambda, double t, RandomStream& rng,
                                        std::size_t max_vertices = kDefaultMaxVertices);

// Singleton-free process from one vertex carrying Po(lambda/2) tokens. After
// each split an offspring without edges and without tokens is discarded. The
// starting vertex is kept until its first split, so t_end = 0 gives 1.
std::uint64_t run_singleton_free(double lambda, double t_end, RandomStream& rng,
                                 std::size_t max_vertices = kDefaultMaxVertices);

// Trajectory x0, x1, ..., x_steps of X_{k+1} = Bin(X_k, 1/2) + Po(lambda/2).
// lambda = 0 is accepted (pure thinning).
std::vector<std::uint64_t> simulate_degree_chain(double lambda, std::uint64_t x0,
                                                 std::size_t steps, RandomStream& rng);

struct KillResult {
  bool killed;
  double time;        // kill time, or time_cap when not killed
  std::uint64_t old_edges;
};

// Two vertices joined by Po(lambda/2) old edges, left vertex is the root.
// Reports the first time every old edge is killed: its left endpoint is not
// the root and meets no new edge. Follows only the lineages that carry old
// edges and the root, which is all the kill predicate depends on.
KillResult kill_time_all_old_edges(double lambda, RandomStream& rng, double time_cap);

// Same experiment on the full tagged multigraph. Cost grows like e^t, so it is
// meant as a reference for short caps. Throws CapExceeded past max_vertices.
KillResult kill_time_full_process(double lambda, RandomStream& rng, double time_cap,
                                  std::size_t max_vertices = 1'000'000);

}  // namespace vsplit

#endif  // VSPLIT_PROCESSES_HPP_

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

#ifndef VSPLIT_LIMIT_SAMPLER_HPP_
#define VSPLIT_LIMIT_SAMPLER_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vsplit/multigraph.hpp"
#include "vsplit/processes.hpp"
#include "vsplit/random.hpp"

namespace vsplit {

struct SamplerCaps {
  std::size_t max_spine = 10'000;
  std::size_t max_revealed = 1'000'000;  // materialized tree nodes
};

struct SamplerDiagnostics {
  // Number of spine cuts revealed: the first n whose cut v_n v_{n+1} carries
  // no stub.
  std::size_t spine_length = 0;
  // Rounds of the jump-to-farthest-crossing revelation: starting at cut 0,
  // move to the farthest subtree reached by an edge crossing the current cut,
  // until a cut with no crossing edge is found.
  std::size_t revelation_rounds = 0;
  // Largest subtree index holding a vertex of the sampled component.
  std::size_t component_reach = 0;
  std::size_t revealed_nodes = 0;
  std::size_t component_size = 0;
  // Stub counts X_0, ..., X_n after each step (the last entry is 0).
  std::vector<std::uint64_t> stub_counts;
  // Fresh stubs created at steps 1..n.
  std::vector<std::uint64_t> fresh_stubs;
};

class SamplerCapExceeded : public std::runtime_error {
 public:
  SamplerCapExceeded(const std::string& what, SamplerDiagnostics d)
      : std::runtime_error(what), diagnostics_(std::move(d)) {}
  const SamplerDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  SamplerDiagnostics diagnostics_;
};

struct LimitSample {
  RootedMultigraph graph;  // ids 0..n-1 in breadth-first order, root 0
  SamplerDiagnostics diagnostics;
};

// Exact sample of the invariant multigraph M(lambda): the root component of
// the tree-Poisson edge model on the spine tree, explored cut by cut until a
// cut carries no crossing edge.
LimitSample sample_m_lambda(double lambda, RandomStream& rng, SamplerCaps caps = {});

// Same construction on the path P_t: k ~ Po(t) uniform points
// t >= t_1 >= ... >= t_k >= 0 give forced labels t - t_1, t_1 - t_2, ...,
// t_{k-1} - t_k, and the first free Exp(1) label is increased by t_k (or by t
// when k = 0).
LimitSample sample_m_lambda_with_prefix(double lambda, double t, RandomStream& rng,
                                        SamplerCaps caps = {});

// Lower-level entry point: explicit forced labels and shift of the first free
// label.
LimitSample sample_m_lambda_with_labels(double lambda, const std::vector<double>& forced_labels,
                                        double first_free_shift, RandomStream& rng,
                                        SamplerCaps caps = {});

// Synchronous invariant graph G(lambda): the same exploration on the canopy
// tree, whose subtree at spine vertex i is complete of depth i - 1.
LimitSample sample_g_lambda(double lambda, RandomStream& rng, SamplerCaps caps = {});

// Runs the cluster process from m for time t.
RootedMultigraph evolve(const RootedMultigraph& m, double lambda, double t, RandomStream& rng,
                        ProcessOptions opts = {});

enum class LimitModel { kM, kG };

// nullopt unless the root has degree exactly 2; otherwise whether both edges
// go to the same neighbour.
std::optional<bool> root_double_edge(const RootedMultigraph& g);

struct DoubleEdgeStat {
  std::uint64_t hits = 0;
  std::uint64_t conditional = 0;  // samples with root degree 2
  std::uint64_t drawn = 0;        // all samples drawn
  double frequency = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;  // Wilson interval at z
  double ci_hi = 0.0;
};

// Rejection-samples until n graphs with root degree 2 were seen. Throws
// std::runtime_error when `budget` draws do not suffice.
DoubleEdgeStat double_edge_stat(LimitModel model, double lambda, std::uint64_t n,
                                RandomStream& rng, std::uint64_t budget = 0, double z = 3.0);

}  // namespace vsplit

#endif  // VSPLIT_LIMIT_SAMPLER_HPP_

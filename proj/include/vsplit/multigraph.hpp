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

#ifndef VSPLIT_MULTIGRAPH_HPP_
#define VSPLIT_MULTIGRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vsplit/random.hpp"

namespace vsplit {

using VertexId = std::uint32_t;

// Largest vertex id accepted from interchange documents. Storage is dense in
// the id, so documents with huge sparse ids are rejected rather than
// allocated.
inline constexpr VertexId kMaxParsedVertexId = (1u << 24) - 1;

class NoSuchVertex : public std::out_of_range {
 public:
  explicit NoSuchVertex(VertexId v)
      : std::out_of_range("no such vertex: " + std::to_string(v)), vertex_(v) {}
  VertexId vertex() const { return vertex_; }

 private:
  VertexId vertex_;
};

class ParseError : public std::runtime_error {
 public:
  // `position` is a byte offset for syntax errors and the offset of the
  // offending value's path (see `path`) for structural errors.
  ParseError(const std::string& what, std::size_t position, std::string path = {})
      : std::runtime_error(what), position_(position), path_(std::move(path)) {}
  std::size_t position() const { return position_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t position_;
  std::string path_;
};

// One parallel-edge bundle as seen from one endpoint. `old_count` is only
// meaningful while old/new tagging is enabled and never exceeds
// `multiplicity`.
struct EdgeBundle {
  VertexId neighbor;
  std::uint32_t multiplicity;
  std::uint32_t old_count;
};

struct Edge {
  VertexId u;
  VertexId v;
  std::uint32_t multiplicity;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SplitOutcome {
  VertexId parent;  // the vertex that was replaced
  VertexId first;
  VertexId second;
  std::uint64_t new_edges;  // Po(lambda/2) edges placed between the offspring
};

// Loopless multigraph with a distinguished root. Parallel edges are stored as
// multiplicities on both endpoints. Vertex ids come from a monotone counter
// and are never reused, so a process run can be traced back through its
// genealogy.
class RootedMultigraph {
 public:
  // Single vertex 0, which is the root.
  RootedMultigraph();

  static RootedMultigraph single() { return RootedMultigraph(); }

  // Validating constructor used by deserialization and tests. Throws
  // std::invalid_argument on loops, zero multiplicities, duplicate vertices,
  // edges touching unknown vertices, or a missing root.
  static RootedMultigraph from_parts(VertexId root, std::span<const VertexId> vertices,
                                     std::span<const Edge> edges);

  VertexId root() const { return root_; }
  std::size_t vertex_count() const { return alive_count_; }
  std::uint64_t edge_count() const { return total_multiplicity_; }
  bool contains(VertexId v) const {
    return v < slots_.size() && slots_[v].alive;
  }

  // Ascending ids.
  std::vector<VertexId> vertices() const;
  // u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  std::span<const EdgeBundle> bundles(VertexId v) const;
  std::uint32_t multiplicity(VertexId u, VertexId v) const;
  std::uint64_t degree(VertexId v) const;

  VertexId add_vertex();
  void add_edges(VertexId u, VertexId v, std::uint32_t count, bool old = false);
  void remove_vertex(VertexId v);
  void set_root(VertexId v);

  // Old/new tagging. Enabling with mark_existing_old = true tags every
  // current edge as old; edges added afterwards default to new.
  bool tagging() const { return tagging_; }
  void enable_tagging(bool mark_existing_old);
  std::uint32_t old_multiplicity(VertexId u, VertexId v) const;
  // Number of new (untagged) edge ends at v.
  std::uint64_t new_degree(VertexId v) const;
  std::uint64_t old_degree(VertexId v) const;

  // Splits v in place (see split_vertex). Returns the offspring.
  SplitOutcome split(VertexId v, double lambda, RandomStream& rng);

  VertexId next_id() const { return static_cast<VertexId>(slots_.size()); }

  friend bool operator==(const RootedMultigraph& a, const RootedMultigraph& b);

 private:
  struct Slot {
    bool alive = false;
    std::vector<EdgeBundle> bundles;
  };

  Slot& slot(VertexId v);
  const Slot& slot(VertexId v) const;
  EdgeBundle* find_bundle(VertexId from, VertexId to);

  std::vector<Slot> slots_;
  std::size_t alive_count_ = 0;
  std::uint64_t total_multiplicity_ = 0;
  VertexId root_ = 0;
  bool tagging_ = false;
};

RootedMultigraph create_single();

// Value-returning split: v is replaced by two fresh vertices; each bundle u-v
// of multiplicity m sends Bin(m, 1/2) edges to the first offspring and the
// rest to the second; Po(lambda/2) new edges join the offspring; a root v is
// succeeded by either offspring with probability 1/2.
std::pair<RootedMultigraph, SplitOutcome> split_vertex(const RootedMultigraph& g, VertexId v,
                                                       double lambda, RandomStream& rng);

// Induced sub-multigraph on the vertices reachable from the root. Ids are
// preserved.
RootedMultigraph root_component(const RootedMultigraph& g);

// Size of the root component without materializing it.
std::size_t root_component_size(const RootedMultigraph& g);

bool is_connected(const RootedMultigraph& g);

// True iff some vertex has degree zero. A single-vertex graph reports false.
bool has_isolated_vertex(const RootedMultigraph& g);

// Relabels vertices 0..n-1 in breadth-first order from the root, visiting
// neighbours in ascending id order. Unreachable vertices follow in id order.
RootedMultigraph relabel_breadth_first(const RootedMultigraph& g);

// Interchange document:
//   {"root": <id>, "vertices": [<id>...], "edges": [[u, v, multiplicity], ...]}
// with vertices ascending, u < v, and edges sorted lexicographically.
std::string to_json(const RootedMultigraph& g);

// Throws ParseError on malformed documents (including loops and zero
// multiplicities).
RootedMultigraph from_json(const std::string& text);

}  // namespace vsplit

#endif  // VSPLIT_MULTIGRAPH_HPP_

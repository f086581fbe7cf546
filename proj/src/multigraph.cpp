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

#include "vsplit/multigraph.hpp"

#include <algorithm>
#include <deque>

namespace vsplit {

RootedMultigraph::RootedMultigraph() {
  slots_.resize(1);
  slots_[0].alive = true;
  alive_count_ = 1;
}

RootedMultigraph create_single() { return RootedMultigraph(); }

RootedMultigraph RootedMultigraph::from_parts(VertexId root, std::span<const VertexId> vertices,
                                              std::span<const Edge> edges) {
  RootedMultigraph g;
  g.slots_.clear();
  g.alive_count_ = 0;
  for (VertexId v : vertices) {
    if (v >= g.slots_.size()) g.slots_.resize(static_cast<std::size_t>(v) + 1);
    if (g.slots_[v].alive) {
      throw std::invalid_argument("duplicate vertex " + std::to_string(v));
    }
    g.slots_[v].alive = true;
    ++g.alive_count_;
  }
  if (!g.contains(root)) {
    throw std::invalid_argument("root " + std::to_string(root) + " is not a vertex");
  }
  g.root_ = root;
  for (const Edge& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
    if (e.multiplicity == 0) throw std::invalid_argument("zero multiplicity edge");
    if (!g.contains(e.u) || !g.contains(e.v)) {
      throw std::invalid_argument("edge touches an unknown vertex");
    }
    g.add_edges(e.u, e.v, e.multiplicity);
  }
  return g;
}

RootedMultigraph::Slot& RootedMultigraph::slot(VertexId v) {
  if (!contains(v)) throw NoSuchVertex(v);
  return slots_[v];
}

const RootedMultigraph::Slot& RootedMultigraph::slot(VertexId v) const {
  if (!contains(v)) throw NoSuchVertex(v);
  return slots_[v];
}

EdgeBundle* RootedMultigraph::find_bundle(VertexId from, VertexId to) {
  for (EdgeBundle& b : slots_[from].bundles) {
    if (b.neighbor == to) return &b;
  }
  return nullptr;
}

std::vector<VertexId> RootedMultigraph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(alive_count_);
  for (VertexId v = 0; v < slots_.size(); ++v) {
    if (slots_[v].alive) out.push_back(v);
  }
  return out;
}

std::vector<Edge> RootedMultigraph::edges() const {
  std::vector<Edge> out;
  for (VertexId v = 0; v < slots_.size(); ++v) {
    if (!slots_[v].alive) continue;
    for (const EdgeBundle& b : slots_[v].bundles) {
      if (v < b.neighbor) out.push_back({v, b.neighbor, b.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

std::span<const EdgeBundle> RootedMultigraph::bundles(VertexId v) const {
  return slot(v).bundles;
}

std::uint32_t RootedMultigraph::multiplicity(VertexId u, VertexId v) const {
  for (const EdgeBundle& b : slot(u).bundles) {
    if (b.neighbor == v) return b.multiplicity;
  }
  return 0;
}

std::uint32_t RootedMultigraph::old_multiplicity(VertexId u, VertexId v) const {
  for (const EdgeBundle& b : slot(u).bundles) {
    if (b.neighbor == v) return b.old_count;
  }
  return 0;
}

std::uint64_t RootedMultigraph::degree(VertexId v) const {
  std::uint64_t d = 0;
  for (const EdgeBundle& b : slot(v).bundles) d += b.multiplicity;
  return d;
}

std::uint64_t RootedMultigraph::old_degree(VertexId v) const {
  std::uint64_t d = 0;
  for (const EdgeBundle& b : slot(v).bundles) d += b.old_count;
  return d;
}

std::uint64_t RootedMultigraph::new_degree(VertexId v) const {
  return degree(v) - old_degree(v);
}

VertexId RootedMultigraph::add_vertex() {
  const auto id = static_cast<VertexId>(slots_.size());
  slots_.emplace_back();
  slots_.back().alive = true;
  ++alive_count_;
  return id;
}

void RootedMultigraph::add_edges(VertexId u, VertexId v, std::uint32_t count, bool old) {
  if (u == v) throw std::invalid_argument("loop at vertex " + std::to_string(u));
  slot(u);
  slot(v);
  if (count == 0) return;
  const std::uint32_t old_part = (tagging_ && old) ? count : 0;
  if (EdgeBundle* b = find_bundle(u, v)) {
    b->multiplicity += count;
    b->old_count += old_part;
    EdgeBundle* r = find_bundle(v, u);
    r->multiplicity += count;
    r->old_count += old_part;
  } else {
    slots_[u].bundles.push_back({v, count, old_part});
    slots_[v].bundles.push_back({u, count, old_part});
  }
  total_multiplicity_ += count;
}

void RootedMultigraph::remove_vertex(VertexId v) {
  Slot& s = slot(v);
  for (const EdgeBundle& b : s.bundles) {
    auto& nb = slots_[b.neighbor].bundles;
    nb.erase(std::find_if(nb.begin(), nb.end(),
                          [v](const EdgeBundle& x) { return x.neighbor == v; }));
    total_multiplicity_ -= b.multiplicity;
  }
  s.bundles.clear();
  s.bundles.shrink_to_fit();
  s.alive = false;
  --alive_count_;
}

void RootedMultigraph::set_root(VertexId v) {
  slot(v);
  root_ = v;
}

void RootedMultigraph::enable_tagging(bool mark_existing_old) {
  tagging_ = true;
  for (Slot& s : slots_) {
    for (EdgeBundle& b : s.bundles) b.old_count = mark_existing_old ? b.multiplicity : 0;
  }
}

SplitOutcome RootedMultigraph::split(VertexId v, double lambda, RandomStream& rng) {
  slot(v);
  const VertexId first = add_vertex();
  const VertexId second = add_vertex();
  // add_vertex may have reallocated slots_; take the bundle list afterwards.
  std::vector<EdgeBundle> moved = std::move(slots_[v].bundles);
  slots_[v].bundles.clear();
  slots_[v].alive = false;
  --alive_count_;

  for (const EdgeBundle& b : moved) {
    std::uint32_t to_first_old = 0;
    std::uint32_t to_first;
    if (tagging_) {
      to_first_old = static_cast<std::uint32_t>(rng.binomial_half(b.old_count));
      to_first = to_first_old +
                 static_cast<std::uint32_t>(rng.binomial_half(b.multiplicity - b.old_count));
    } else {
      to_first = static_cast<std::uint32_t>(rng.binomial_half(b.multiplicity));
    }
    const std::uint32_t to_second = b.multiplicity - to_first;
    const std::uint32_t to_second_old = b.old_count - to_first_old;

    auto& nb = slots_[b.neighbor].bundles;
    auto it = std::find_if(nb.begin(), nb.end(),
                           [v](const EdgeBundle& x) { return x.neighbor == v; });
    if (to_first > 0) {
      *it = {first, to_first, to_first_old};
      slots_[first].bundles.push_back({b.neighbor, to_first, to_first_old});
    } else {
      nb.erase(it);
    }
    if (to_second > 0) {
      nb.push_back({second, to_second, to_second_old});
      slots_[second].bundles.push_back({b.neighbor, to_second, to_second_old});
    }
  }

  const std::uint64_t fresh = rng.poisson(lambda / 2.0);
  if (fresh > 0) add_edges(first, second, static_cast<std::uint32_t>(fresh), false);

  if (root_ == v) root_ = rng.coin() ? first : second;
  return {v, first, second, fresh};
}

std::pair<RootedMultigraph, SplitOutcome> split_vertex(const RootedMultigraph& g, VertexId v,
                                                       double lambda, RandomStream& rng) {
  if (!g.contains(v)) throw NoSuchVertex(v);
  RootedMultigraph out = g;
  SplitOutcome o = out.split(v, lambda, rng);
  return {std::move(out), o};
}

namespace {

// Marks vertices reachable from the root; returns the visit order.
std::vector<VertexId> reach_from_root(const RootedMultigraph& g, std::vector<char>& seen) {
  seen.assign(g.next_id(), 0);
  std::vector<VertexId> order;
  order.push_back(g.root());
  seen[g.root()] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const EdgeBundle& b : g.bundles(order[i])) {
      if (!seen[b.neighbor]) {
        seen[b.neighbor] = 1;
        order.push_back(b.neighbor);
      }
    }
  }
  return order;
}

}  // namespace

std::size_t root_component_size(const RootedMultigraph& g) {
  std::vector<char> seen;
  return reach_from_root(g, seen).size();
}

RootedMultigraph root_component(const RootedMultigraph& g) {
  std::vector<char> seen;
  std::vector<VertexId> keep = reach_from_root(g, seen);
  if (keep.size() == g.vertex_count()) return g;
  RootedMultigraph out = g;
  for (VertexId v : g.vertices()) {
    if (!seen[v]) out.remove_vertex(v);
  }
  return out;
}

bool is_connected(const RootedMultigraph& g) {
  return root_component_size(g) == g.vertex_count();
}

bool has_isolated_vertex(const RootedMultigraph& g) {
  if (g.vertex_count() < 2) return false;
  for (VertexId v : g.vertices()) {
    if (g.bundles(v).empty()) return true;
  }
  return false;
}

RootedMultigraph relabel_breadth_first(const RootedMultigraph& g) {
  std::vector<VertexId> order;
  std::vector<char> seen(g.next_id(), 0);
  auto visit_from = [&](VertexId start) {
    std::size_t head = order.size();
    order.push_back(start);
    seen[start] = 1;
    for (; head < order.size(); ++head) {
      std::vector<VertexId> nbrs;
      for (const EdgeBundle& b : g.bundles(order[head])) nbrs.push_back(b.neighbor);
      std::sort(nbrs.begin(), nbrs.end());
      for (VertexId u : nbrs) {
        if (!seen[u]) {
          seen[u] = 1;
          order.push_back(u);
        }
      }
    }
  };
  visit_from(g.root());
  for (VertexId v : g.vertices()) {
    if (!seen[v]) visit_from(v);
  }
  std::vector<VertexId> new_id(g.next_id(), 0);
  for (VertexId i = 0; i < order.size(); ++i) new_id[order[i]] = i;

  std::vector<VertexId> verts(order.size());
  for (VertexId i = 0; i < verts.size(); ++i) verts[i] = i;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    VertexId a = new_id[e.u], b = new_id[e.v];
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, e.multiplicity});
  }
  return RootedMultigraph::from_parts(0, verts, edges);
}

bool operator==(const RootedMultigraph& a, const RootedMultigraph& b) {
  return a.root() == b.root() && a.vertex_count() == b.vertex_count() &&
         a.vertices() == b.vertices() && a.edges() == b.edges();
}

}  // namespace vsplit

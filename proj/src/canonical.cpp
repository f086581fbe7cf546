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

#include "vsplit/canonical.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <vector>

namespace vsplit {

std::string CanonicalCode::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size() + 1);
  out.push_back(overflow ? 'x' : 'c');
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

namespace {

void put_varint(std::string& out, std::uint64_t x) {
  while (x >= 0x80) {
    out.push_back(static_cast<char>((x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

CanonicalCode coarse_signature(const RootedMultigraph& g) {
  std::vector<std::uint64_t> degrees;
  degrees.reserve(g.vertex_count());
  for (VertexId v : g.vertices()) degrees.push_back(g.degree(v));
  std::sort(degrees.rbegin(), degrees.rend());
  CanonicalCode code;
  code.overflow = true;
  code.bytes.push_back('\x01');
  put_varint(code.bytes, g.vertex_count());
  put_varint(code.bytes, g.degree(g.root()));
  for (std::uint64_t d : degrees) put_varint(code.bytes, d);
  return code;
}

constexpr std::size_t kMaxExact = kMaxCanonicalCap;

class Canonicalizer {
 public:
  Canonicalizer(const RootedMultigraph& g) : n_(g.vertex_count()) {
    std::vector<VertexId> ids = g.vertices();
    // Root first so its index is 0.
    std::stable_partition(ids.begin(), ids.end(), [&](VertexId v) { return v == g.root(); });
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        adj_[i][j] = i == j ? 0
                            : static_cast<std::uint8_t>(std::min<std::uint32_t>(
                                  g.multiplicity(ids[i], ids[j]), kCanonicalMultiplicityCap));
      }
    }
    refine_colors();
    find_twins();
  }

  std::string run() {
    order_.assign(n_, 0);
    used_.assign(n_, 0);
    current_.clear();
    best_.clear();
    have_best_ = false;
    search(0);
    std::string out;
    out.push_back('\x00');
    out.push_back(static_cast<char>(n_));
    out.append(best_.begin(), best_.end());
    return out;
  }

 private:
  // Iterated degree refinement. Colors depend only on isomorphism-invariant
  // data, so any ordering consistent with them is a valid search space.
  void refine_colors() {
    using Key = std::vector<int>;
    color_.assign(n_, 0);
    std::vector<Key> keys(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      Key k{v == 0 ? 0 : 1};
      int deg = 0;
      std::vector<int> mults;
      for (std::size_t u = 0; u < n_; ++u) {
        if (adj_[v][u]) {
          deg += adj_[v][u];
          mults.push_back(adj_[v][u]);
        }
      }
      std::sort(mults.begin(), mults.end());
      k.push_back(deg);
      k.insert(k.end(), mults.begin(), mults.end());
      keys[v] = std::move(k);
    }
    std::size_t classes = compress(keys);
    for (std::size_t round = 0; round < n_; ++round) {
      for (std::size_t v = 0; v < n_; ++v) {
        std::vector<std::pair<int, int>> nb;
        for (std::size_t u = 0; u < n_; ++u) {
          if (adj_[v][u]) nb.emplace_back(color_[u], adj_[v][u]);
        }
        std::sort(nb.begin(), nb.end());
        Key k{color_[v]};
        for (auto [c, m] : nb) {
          k.push_back(c);
          k.push_back(m);
        }
        keys[v] = std::move(k);
      }
      const std::size_t next = compress(keys);
      if (next == classes) break;
      classes = next;
    }
  }

  // u and v are twins when their rows agree outside {u, v}; swapping them is
  // then an automorphism, so the search only tries the first unused twin.
  void find_twins() {
    twin_prev_.assign(n_, kNone);
    for (std::size_t v = 1; v < n_; ++v) {
      for (std::size_t u = v; u-- > 1;) {
        if (color_[u] != color_[v]) continue;
        bool same = true;
        for (std::size_t w = 0; w < n_ && same; ++w) {
          if (w != u && w != v && adj_[u][w] != adj_[v][w]) same = false;
        }
        if (same) {
          twin_prev_[v] = u;
          break;
        }
      }
    }
  }

  std::size_t compress(const std::vector<std::vector<int>>& keys) {
    std::map<std::vector<int>, int> rank;
    for (const auto& k : keys) rank.emplace(k, 0);
    int r = 0;
    for (auto& [k, v] : rank) v = r++;
    for (std::size_t v = 0; v < n_; ++v) color_[v] = rank[keys[v]];
    slot_color_ = color_;
    std::sort(slot_color_.begin(), slot_color_.end());
    return rank.size();
  }

  // Position p must receive a vertex of color slot_color_[p]. Entries are
  // emitted column by column so a prefix only depends on placed vertices.
  void search(std::size_t pos) {
    if (pos == n_) {
      if (!have_best_ || current_ < best_) {
        best_ = current_;
        have_best_ = true;
      }
      return;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (used_[v] || color_[v] != slot_color_[pos]) continue;
      if (twin_prev_[v] != kNone && !used_[twin_prev_[v]]) continue;
      const std::size_t mark = current_.size();
      for (std::size_t i = 0; i < pos; ++i) current_.push_back(adj_[order_[i]][v]);
      if (have_best_ && prefix_worse()) {
        current_.resize(mark);
        continue;
      }
      used_[v] = 1;
      order_[pos] = v;
      search(pos + 1);
      used_[v] = 0;
      current_.resize(mark);
    }
  }

  bool prefix_worse() const {
    // best_ is complete, so compare against its prefix of equal length.
    return std::lexicographical_compare(best_.begin(), best_.begin() + current_.size(),
                                        current_.begin(), current_.end());
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t n_;
  std::vector<std::size_t> twin_prev_;
  std::array<std::array<std::uint8_t, kMaxExact>, kMaxExact> adj_{};
  std::vector<int> color_;
  std::vector<int> slot_color_;
  std::vector<std::size_t> order_;
  std::vector<char> used_;
  std::vector<std::uint8_t> current_;
  std::vector<std::uint8_t> best_;
  bool have_best_ = false;
};

}  // namespace

CanonicalCode canonical_form(const RootedMultigraph& g, std::size_t cap) {
  cap = std::min(cap, kMaxExact);
  if (g.vertex_count() > cap) return coarse_signature(g);
  CanonicalCode code;
  code.bytes = Canonicalizer(g).run();
  return code;
}

}  // namespace vsplit

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

#ifndef VSPLIT_CANONICAL_HPP_
#define VSPLIT_CANONICAL_HPP_

#include <cstddef>
#include <functional>
#include <string>

#include "vsplit/multigraph.hpp"

namespace vsplit {

inline constexpr std::size_t kDefaultCanonicalCap = 8;
inline constexpr std::size_t kMaxCanonicalCap = 24;
inline constexpr std::uint32_t kCanonicalMultiplicityCap = 15;

// Byte-string label of a rooted multigraph's isomorphism class. Exact for
// graphs of at most `cap` vertices (multiplicities saturate at 15). Larger
// graphs get a coarse signature (vertex count, root degree, sorted degree
// sequence) with `overflow` set; such codes only bucket graphs. `cap` is
// clamped to kMaxCanonicalCap.
struct CanonicalCode {
  std::string bytes;
  bool overflow = false;

  // 'c', or 'x' for overflow codes, followed by the bytes in hex.
  std::string hex() const;
  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

CanonicalCode canonical_form(const RootedMultigraph& g, std::size_t cap = kDefaultCanonicalCap);

}  // namespace vsplit

template <>
struct std::hash<vsplit::CanonicalCode> {
  std::size_t operator()(const vsplit::CanonicalCode& c) const noexcept {
    return std::hash<std::string>{}(c.bytes) ^ static_cast<std::size_t>(c.overflow);
  }
};

#endif  // VSPLIT_CANONICAL_HPP_

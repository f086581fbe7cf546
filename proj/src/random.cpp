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

#include "vsplit/random.hpp"

#include <bit>

namespace vsplit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t index) {
  return RandomStream(splitmix64(master_seed) ^
                      splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

std::uint64_t RandomStream::binomial_half(std::uint64_t n) {
  std::uint64_t total = 0;
  while (n >= 64) {
    total += static_cast<std::uint64_t>(std::popcount(engine_()));
    n -= 64;
  }
  if (n > 0) {
    const std::uint64_t mask = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    total += static_cast<std::uint64_t>(std::popcount(engine_() & mask));
  }
  return total;
}

std::uint64_t RandomStream::binomial(std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return std::binomial_distribution<std::uint64_t>(n, p)(engine_);
}

}  // namespace vsplit

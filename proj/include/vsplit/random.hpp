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

#ifndef VSPLIT_RANDOM_HPP_
#define VSPLIT_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace vsplit {

// SplitMix64 finalizer. Used to turn (master seed, replica index) pairs into
// well separated engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

// The only source of randomness in the library. Every sampler takes one by
// reference; nothing draws from global state.
//
// Replica streams are derived as
//   seed_i = splitmix64(splitmix64(master) ^ splitmix64(index + 0x9e37...))
// and feed a 64-bit Mersenne twister. The derivation is fixed so that a run
// manifest (master seed, replica count) reproduces every replica exactly,
// independent of how replicas were scheduled onto threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  double exponential(double rate = 1.0) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

  // Po(mean); mean <= 0 yields 0.
  std::uint64_t poisson(double mean);

  // Bin(n, 1/2) with a popcount fast path for small n.
  std::uint64_t binomial_half(std::uint64_t n);

  std::uint64_t binomial(std::uint64_t n, double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vsplit

#endif  // VSPLIT_RANDOM_HPP_

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

#ifndef VSPLIT_STATS_HPP_
#define VSPLIT_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vsplit/canonical.hpp"
#include "vsplit/random.hpp"

namespace vsplit {

// Counts over a totally ordered key type. Merging is associative, so
// per-worker partials can be combined in any grouping.
template <class Key>
class EmpiricalDistribution {
 public:
  void add(const Key& key, std::uint64_t count = 1) {
    if (count == 0) return;
    counts_[key] += count;
    total_ += count;
  }

  void merge(const EmpiricalDistribution& other) {
    for (const auto& [k, c] : other.counts_) add(k, c);
  }

  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::size_t support_size() const { return counts_.size(); }
  const std::map<Key, std::uint64_t>& counts() const { return counts_; }

  std::uint64_t count(const Key& key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
  }

  double probability(const Key& key) const {
    if (total_ == 0) throw std::domain_error("empty distribution");
    return static_cast<double>(count(key)) / static_cast<double>(total_);
  }

 private:
  std::map<Key, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

using IntDistribution = EmpiricalDistribution<std::int64_t>;
using CodeDistribution = EmpiricalDistribution<CanonicalCode>;

inline std::string key_string(std::int64_t k) { return std::to_string(k); }
inline std::string key_string(const CanonicalCode& c) { return c.hex(); }

// Two-column CSV dump: key,count.
template <class Key>
void write_csv(std::ostream& out, const EmpiricalDistribution<Key>& d) {
  out << "key,count\n";
  for (const auto& [k, c] : d.counts()) out << key_string(k) << ',' << c << '\n';
}

template <class Key>
double tv_distance(const EmpiricalDistribution<Key>& p, const EmpiricalDistribution<Key>& q) {
  if (p.empty() || q.empty()) throw std::domain_error("tv_distance: empty distribution");
  const double np = static_cast<double>(p.total());
  const double nq = static_cast<double>(q.total());
  double sum = 0.0;
  auto a = p.counts().begin();
  auto b = q.counts().begin();
  while (a != p.counts().end() || b != q.counts().end()) {
    if (b == q.counts().end() || (a != p.counts().end() && a->first < b->first)) {
      sum += static_cast<double>(a->second) / np;
      ++a;
    } else if (a == p.counts().end() || b->first < a->first) {
      sum += static_cast<double>(b->second) / nq;
      ++b;
    } else {
      sum += std::abs(static_cast<double>(a->second) / np - static_cast<double>(b->second) / nq);
      ++a;
      ++b;
    }
  }
  return std::min(1.0, sum / 2.0);
}

struct NoiseFloor {
  double quantile_value;  // the requested quantile of the null TV
  double mean;
  std::size_t resamples;
};

// Null distribution of tv_distance(p, q): the pooled observations are dealt
// at random into groups of sizes |p| and |q| (a permutation test), which
// keeps rare keys on one side as independent samples would.
template <class Key>
NoiseFloor tv_noise_floor(const EmpiricalDistribution<Key>& p, const EmpiricalDistribution<Key>& q,
                          RandomStream& rng, std::size_t resamples = 200, double quantile = 0.95) {
  if (resamples == 0) throw std::invalid_argument("tv_noise_floor: resamples must be positive");
  if (p.empty() || q.empty()) throw std::domain_error("tv_noise_floor: empty distribution");
  EmpiricalDistribution<Key> pooled = p;
  pooled.merge(q);
  std::vector<std::uint32_t> labels;
  labels.reserve(pooled.total());
  std::vector<std::uint64_t> totals;
  for (const auto& [k, c] : pooled.counts()) {
    labels.insert(labels.end(), c, static_cast<std::uint32_t>(totals.size()));
    totals.push_back(c);
  }
  const std::uint64_t na = p.total();
  const double da = static_cast<double>(na);
  const double db = static_cast<double>(q.total());
  std::vector<std::uint64_t> in_a(totals.size());
  std::vector<double> values;
  values.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    std::fill(in_a.begin(), in_a.end(), 0);
    // Partial Fisher-Yates: the first na slots form a uniform random subset.
    for (std::uint64_t i = 0; i < na; ++i) {
      const std::uint64_t j = i + rng.uniform_index(labels.size() - i);
      std::swap(labels[i], labels[j]);
      ++in_a[labels[i]];
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < totals.size(); ++k) {
      const auto a = static_cast<double>(in_a[k]);
      sum += std::abs(a / da - (static_cast<double>(totals[k]) - a) / db);
    }
    values.push_back(std::min(1.0, sum / 2.0));
  }
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  const auto idx = static_cast<std::size_t>(quantile * static_cast<double>(resamples - 1) + 0.5);
  return {values[std::min(idx, resamples - 1)], mean / static_cast<double>(resamples), resamples};
}

double poisson_pmf(double mean, std::int64_t k);
// Support {1, 2, ...}: p (1-p)^{k-1}.
double geometric_pmf(double p, std::int64_t k);

struct FitResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  // TV between the sample and the reference law truncated to the bins'
  // explicit range plus its tail.
  double tv = 0.0;
  std::size_t bins = 0;
};

// Pearson chi-square fit of integer data to a law supported on
// {support_min, support_min + 1, ...}. Consecutive values are pooled so that
// every bin expects at least 5 observations; the last bin takes the tail.
// Throws std::invalid_argument below 100 samples.
FitResult fit_discrete(const IntDistribution& d, const std::function<double(std::int64_t)>& pmf,
                       std::int64_t support_min, int estimated_parameters = 0);
FitResult fit_poisson(const IntDistribution& d, double mean);
FitResult fit_geometric(const IntDistribution& d, double p);

// TV between the sample and an exact pmf given on 0..pmf.size()-1; the pmf's
// missing mass counts as disagreement.
double tv_to_pmf(const IntDistribution& d, const std::vector<double>& pmf);

double chi_square_survival(double statistic, int dof);

std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t trials, double z);

struct MeanEstimate {
  std::uint64_t n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Welford accumulator; merge uses the parallel update.
class MeanAccumulator {
 public:
  void add(double x);
  void merge(const MeanAccumulator& other);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  MeanEstimate estimate(double z = 1.96) const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MeanEstimate mean_ci(const std::vector<double>& samples, double z = 1.96);

struct TestResult {
  double statistic;
  double p_value;
};

// Two-sided Mann-Whitney U test, normal approximation with tie correction.
// The statistic is U of the first sample.
TestResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b);

// One-sample Kolmogorov-Smirnov test against Uniform(0, 1).
TestResult ks_uniform(std::vector<double> samples);

}  // namespace vsplit

#endif  // VSPLIT_STATS_HPP_

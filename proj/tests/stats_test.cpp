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

#include "vsplit/stats.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vsplit/random.hpp"

namespace vsplit {
namespace {

IntDistribution from_counts(const std::vector<std::pair<std::int64_t, std::uint64_t>>& kv) {
  IntDistribution d;
  for (const auto& [k, c] : kv) d.add(k, c);
  return d;
}

IntDistribution random_distribution(RandomStream& rng) {
  IntDistribution d;
  const int n = 1 + static_cast<int>(rng.uniform_index(6));
  for (int i = 0; i < n; ++i) d.add(static_cast<std::int64_t>(rng.uniform_index(8)), 1 + rng.uniform_index(20));
  return d;
}

TEST(Tv, Examples) {
  const auto p = from_counts({{0, 3}, {1, 1}});
  const auto q = from_counts({{0, 1}, {1, 3}});
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.5);
  EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(from_counts({{0, 5}}), from_counts({{1, 2}, {2, 7}})), 1.0);
  EXPECT_THROW(tv_distance(p, IntDistribution{}), std::domain_error);
}

TEST(Tv, IsAMetric) {
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_distribution(rng);
    const auto b = random_distribution(rng);
    const auto c = random_distribution(rng);
    EXPECT_DOUBLE_EQ(tv_distance(a, b), tv_distance(b, a));
    EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    EXPECT_GE(tv_distance(a, b), 0.0);
    EXPECT_LE(tv_distance(a, b), 1.0);
  }
}

TEST(Distribution, CountsAndMerge) {
  IntDistribution d;
  d.add(3);
  d.add(3, 2);
  d.add(4, 0);
  EXPECT_EQ(d.total(), 3u);
  EXPECT_EQ(d.support_size(), 1u);
  IntDistribution e;
  e.add(5);
  d.merge(e);
  EXPECT_EQ(d.total(), 4u);
  EXPECT_DOUBLE_EQ(d.probability(5), 0.25);
  EXPECT_THROW(IntDistribution{}.probability(1), std::domain_error);
}

TEST(NoiseFloor, SameSourceIsCovered) {
  // Two samples from one law: their TV should rarely exceed the floor.
  RandomStream rng(2);
  int covered = 0;
  for (int rep = 0; rep < 40; ++rep) {
    IntDistribution a;
    IntDistribution b;
    for (int i = 0; i < 2000; ++i) {
      a.add(static_cast<std::int64_t>(rng.poisson(3.0)));
      b.add(static_cast<std::int64_t>(rng.poisson(3.0)));
    }
    const NoiseFloor f = tv_noise_floor(a, b, rng);
    EXPECT_EQ(f.resamples, 200u);
    EXPECT_LE(f.mean, f.quantile_value);
    covered += tv_distance(a, b) <= f.quantile_value ? 1 : 0;
  }
  EXPECT_GE(covered, 32);
}

TEST(NoiseFloor, Errors) {
  RandomStream rng(3);
  const auto a = from_counts({{0, 1}});
  EXPECT_THROW(tv_noise_floor(a, IntDistribution{}, rng), std::domain_error);
  EXPECT_THROW(tv_noise_floor(a, a, rng, 0), std::invalid_argument);
}

TEST(Pmf, Examples) {
  EXPECT_DOUBLE_EQ(geometric_pmf(1.0, 1), 1.0);
  EXPECT_NEAR(geometric_pmf(std::exp(-1.0), 1), std::exp(-1.0), 1e-15);
  EXPECT_EQ(geometric_pmf(0.5, 0), 0.0);
  EXPECT_THROW(geometric_pmf(0.0, 1), std::domain_error);
  EXPECT_NEAR(poisson_pmf(2.0, 0), std::exp(-2.0), 1e-15);
  EXPECT_EQ(poisson_pmf(2.0, -1), 0.0);
}

TEST(Pmf, SumsToOne) {
  for (double m : {0.01, 1.0, 7.5, 100.0, 1000.0}) {
    double s = 0.0;
    for (std::int64_t k = 0; k < 5000; ++k) s += poisson_pmf(m, k);
    EXPECT_NEAR(s, 1.0, 1e-12) << m;
  }
  for (double p : {0.05, 0.5, 1.0}) {
    double s = 0.0;
    for (std::int64_t k = 1; k < 2000; ++k) s += geometric_pmf(p, k);
    EXPECT_NEAR(s, 1.0, 1e-12) << p;
  }
}

TEST(FitPoisson, AcceptsTrueLaw) {
  RandomStream rng(4);
  IntDistribution d;
  for (int i = 0; i < 1000000; ++i) d.add(static_cast<std::int64_t>(rng.poisson(2.0)));
  const FitResult f = fit_poisson(d, 2.0);
  EXPECT_GT(f.p_value, 0.001);
  EXPECT_LT(f.tv, 0.01);
  EXPECT_GT(f.bins, 5u);
}

TEST(FitPoisson, RejectsWrongMean) {
  RandomStream rng(5);
  IntDistribution d;
  for (int i = 0; i < 100000; ++i) d.add(static_cast<std::int64_t>(rng.poisson(2.0)));
  EXPECT_LT(fit_poisson(d, 3.0).p_value, 1e-6);
}

TEST(FitPoisson, TooFewSamples) {
  IntDistribution d;
  d.add(1, 99);
  EXPECT_THROW(fit_poisson(d, 1.0), std::invalid_argument);
}

TEST(FitPoisson, PValuesLookUniform) {
  RandomStream rng(6);
  std::vector<double> ps;
  for (int rep = 0; rep < 200; ++rep) {
    IntDistribution d;
    for (int i = 0; i < 5000; ++i) d.add(static_cast<std::int64_t>(rng.poisson(4.0)));
    ps.push_back(fit_poisson(d, 4.0).p_value);
  }
  EXPECT_GT(ks_uniform(ps).p_value, 0.01);
}

TEST(TvToPmf, ExactPmfAgainstItself) {
  std::vector<double> pmf;
  IntDistribution d;
  for (std::int64_t k = 0; k <= 20; ++k) {
    pmf.push_back(poisson_pmf(1.0, k));
    d.add(k, static_cast<std::uint64_t>(std::llround(poisson_pmf(1.0, k) * 1e15)));
  }
  EXPECT_NEAR(tv_to_pmf(d, pmf), 0.0, 1e-9);
}

TEST(ChiSquare, SurvivalValues) {
  EXPECT_NEAR(chi_square_survival(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_survival(0.0, 3), 1.0, 1e-15);
}

TEST(Wilson, Examples) {
  const auto [lo, hi] = wilson_ci(50, 100, 1.96);
  EXPECT_GT(lo, 0.40);
  EXPECT_LT(hi, 0.60);
  EXPECT_LT(lo, 0.5);
  EXPECT_GT(hi, 0.5);
  const auto [zlo, zhi] = wilson_ci(0, 10, 1.96);
  EXPECT_EQ(zlo, 0.0);
  EXPECT_GT(zhi, 0.0);
  EXPECT_THROW(wilson_ci(5, 0, 1.96), std::domain_error);
  EXPECT_THROW(wilson_ci(5, 4, 1.96), std::domain_error);
}

TEST(MeanCi, KnownSample) {
  const MeanEstimate e = mean_ci({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.stderr_, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
  EXPECT_NEAR(e.hi - e.mean, 1.96 * e.stderr_, 1e-12);
}

TEST(MeanAccumulator, MergeMatchesSequential) {
  RandomStream rng(7);
  MeanAccumulator all;
  MeanAccumulator a;
  MeanAccumulator b;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.exponential();
    all.add(x);
    (i % 3 == 0 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-10);
}

TEST(MannWhitney, DetectsShiftAndAcceptsNull) {
  RandomStream rng(8);
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(rng.exponential());
    b.push_back(rng.exponential());
    c.push_back(rng.exponential() + 0.3);
  }
  EXPECT_GT(mann_whitney(a, b).p_value, 0.001);
  EXPECT_LT(mann_whitney(a, c).p_value, 1e-6);
}

TEST(KsUniform, Examples) {
  RandomStream rng(9);
  std::vector<double> u;
  std::vector<double> skewed;
  for (int i = 0; i < 1000; ++i) {
    u.push_back(rng.uniform());
    skewed.push_back(rng.uniform() * rng.uniform());
  }
  EXPECT_GT(ks_uniform(u).p_value, 0.001);
  EXPECT_LT(ks_uniform(skewed).p_value, 1e-6);
}

}  // namespace
}  // namespace vsplit

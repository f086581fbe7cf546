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

#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace vsplit {

double poisson_pmf(double mean, std::int64_t k) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson_pmf: negative mean");
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

double geometric_pmf(double p, std::int64_t k) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("geometric_pmf: p must lie in (0, 1]");
  if (k < 1) return 0.0;
  if (p == 1.0) return k == 1 ? 1.0 : 0.0;
  return p * std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

double chi_square_survival(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (!(statistic > 0.0)) return statistic == 0.0 ? 1.0 : 0.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

FitResult fit_discrete(const IntDistribution& d, const std::function<double(std::int64_t)>& pmf,
                       std::int64_t support_min, int estimated_parameters) {
  if (d.total() < 100) throw std::invalid_argument("goodness of fit needs at least 100 samples");
  const double n = static_cast<double>(d.total());
  const std::int64_t max_key = d.counts().rbegin()->first;

  // Explicit range: up to the largest observation and until the remaining
  // mass is negligible.
  std::vector<double> probs;
  double cumulative = 0.0;
  for (std::int64_t k = support_min;; ++k) {
    const double p = pmf(k);
    probs.push_back(p);
    cumulative += p;
    if (k >= max_key && (1.0 - cumulative < 1e-12 || n * (1.0 - cumulative) < 1e-9)) break;
    if (probs.size() > 10'000'000) throw std::runtime_error("fit_discrete: pmf tail too heavy");
  }

  FitResult r;
  double below = 0.0;
  for (const auto& [k, c] : d.counts()) {
    if (k < support_min) below += static_cast<double>(c);
  }
  double tv = below / n;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    tv += std::abs(static_cast<double>(d.count(support_min + static_cast<std::int64_t>(i))) / n - probs[i]);
  }
  tv += std::max(0.0, 1.0 - cumulative);
  r.tv = std::min(1.0, tv / 2.0);
  if (below > 0.0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }

  // Bins as [start, end) ranges of indices into probs, last one open-ended.
  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Bin> bins;
  Bin current;
  double consumed = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    current.expected += n * probs[i];
    current.observed += static_cast<double>(d.count(support_min + static_cast<std::int64_t>(i)));
    consumed += probs[i];
    const double rest = n * std::max(0.0, 1.0 - consumed);
    if (current.expected >= 5.0 && rest >= 5.0) {
      bins.push_back(current);
      current = Bin{};
    }
  }
  // Tail: everything not yet binned, including mass past the explicit range.
  current.expected = n;
  current.observed = n;
  for (const Bin& b : bins) {
    current.expected -= b.expected;
    current.observed -= b.observed;
  }
  if (current.expected < 5.0 && !bins.empty()) {
    bins.back().expected += current.expected;
    bins.back().observed += current.observed;
  } else {
    bins.push_back(current);
  }

  for (const Bin& b : bins) {
    if (b.expected <= 0.0) {
      if (b.observed > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = b.observed - b.expected;
    r.statistic += diff * diff / b.expected;
  }
  r.bins = bins.size();
  r.dof = static_cast<int>(bins.size()) - 1 - estimated_parameters;
  r.p_value = chi_square_survival(r.statistic, r.dof);
  return r;
}

FitResult fit_poisson(const IntDistribution& d, double mean) {
  if (!(mean > 0.0)) throw std::domain_error("fit_poisson: mean must be positive");
  return fit_discrete(d, [mean](std::int64_t k) { return poisson_pmf(mean, k); }, 0);
}

FitResult fit_geometric(const IntDistribution& d, double p) {
  return fit_discrete(d, [p](std::int64_t k) { return geometric_pmf(p, k); }, 1);
}

double tv_to_pmf(const IntDistribution& d, const std::vector<double>& pmf) {
  if (d.empty()) throw std::domain_error("tv_to_pmf: empty distribution");
  const double n = static_cast<double>(d.total());
  double sum = 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    sum += std::abs(static_cast<double>(d.count(static_cast<std::int64_t>(k))) / n - pmf[k]);
    mass += pmf[k];
  }
  for (const auto& [k, c] : d.counts()) {
    if (k < 0 || k >= static_cast<std::int64_t>(pmf.size())) sum += static_cast<double>(c) / n;
  }
  sum += std::max(0.0, 1.0 - mass);
  return std::min(1.0, sum / 2.0);
}

std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::domain_error("wilson_ci: no trials");
  if (successes > trials) throw std::domain_error("wilson_ci: successes exceed trials");
  if (!(z > 0.0)) throw std::domain_error("wilson_ci: z must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

void MeanAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

double MeanAccumulator::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

MeanEstimate MeanAccumulator::estimate(double z) const {
  if (n_ == 0) throw std::domain_error("mean of no samples");
  MeanEstimate e;
  e.n = n_;
  e.mean = mean_;
  e.stderr_ = std::sqrt(variance() / static_cast<double>(n_));
  e.lo = e.mean - z * e.stderr_;
  e.hi = e.mean + z * e.stderr_;
  return e;
}

MeanEstimate mean_ci(const std::vector<double>& samples, double z) {
  MeanAccumulator acc;
  for (double x : samples) acc.add(x);
  return acc.estimate(z);
}

TestResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::domain_error("mann_whitney: empty sample");
  std::vector<std::pair<double, int>> all;
  all.reserve(a.size() + b.size());
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end());

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) rank_sum_a += avg_rank;
    }
    i = j;
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double u = rank_sum_a - na * (na + 1.0) / 2.0;
  const double mu = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) return {u, 1.0};
  const double z = (u - mu) / std::sqrt(var);
  return {u, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

TestResult ks_uniform(std::vector<double> samples) {
  if (samples.empty()) throw std::domain_error("ks_uniform: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  // Asymptotic Kolmogorov law with the Stephens small-sample correction.
  const double sn = std::sqrt(n);
  const double lam = (sn + 0.12 + 0.11 / sn) * d;
  double q = 0.0;
  if (lam < 0.2) {
    q = 1.0;
  } else {
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lam * lam);
      q += (k % 2 == 1 ? 2.0 : -2.0) * term;
      if (term < 1e-16) break;
    }
  }
  return {d, std::clamp(q, 0.0, 1.0)};
}

}  // namespace vsplit

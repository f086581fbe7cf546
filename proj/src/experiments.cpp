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

#include "vsplit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "json.hpp"
#include "vsplit/canonical.hpp"
#include "vsplit/genealogy.hpp"
#include "vsplit/limit_sampler.hpp"
#include "vsplit/stats.hpp"
#include "vsplit/svg.hpp"

namespace vsplit {

namespace {

using Json = nlohmann::json;

constexpr std::uint64_t kChunk = 256;
constexpr std::size_t kBootstrapResamples = 200;
constexpr double kFloorQuantile = 0.95;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

using Cell = std::variant<std::int64_t, double, std::string>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::string render(const std::string& format) const {
    std::ostringstream out;
    if (format == "json") {
      Json rows = Json::array();
      for (const auto& row : rows_) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
          std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
        }
        rows.push_back(std::move(obj));
      }
      out << rows.dump(2) << '\n';
      return out.str();
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        if (auto* d = std::get_if<double>(&row[i])) {
          out << num(*d);
        } else if (auto* n = std::get_if<std::int64_t>(&row[i])) {
          out << *n;
        } else {
          out << std::get<std::string>(row[i]);
        }
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// Runs fn(rng, i) for replicas i = 0..n-1, each with its own derived stream,
// so results do not depend on the thread count. T must be default
// constructible and must not be bool (vector<bool> is not thread safe).
template <class Fn>
auto run_replicas(std::uint64_t n, std::uint64_t seed, unsigned threads, Fn&& fn) {
  using T = decltype(fn(std::declval<RandomStream&>(), std::uint64_t{}));
  static_assert(!std::is_same_v<T, bool>);
  std::vector<T> out(n);
  std::atomic<std::uint64_t> next{0};
  std::mutex mu;
  std::exception_ptr error;
  std::uint64_t error_index = n;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t start = next.fetch_add(kChunk);
      if (start >= n) return;
      const std::uint64_t end = std::min(n, start + kChunk);
      for (std::uint64_t i = start; i < end; ++i) {
        try {
          RandomStream rng = RandomStream::derive(seed, i);
          out[i] = fn(rng, i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
          return;
        }
      }
    }
  };
  const auto pool = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, threads), (n + kChunk - 1) / kChunk));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < pool; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct Context {
  Context(const ExperimentConfig& c, unsigned t) : cfg(c), threads(t) {}

  const ExperimentConfig& cfg;
  unsigned threads;
  Json seeds = Json::object();
  Json caps = Json::object();
  Json notes = Json::object();
  ExperimentOutput out;

  std::uint64_t seed_for(const std::string& tag) {
    const std::uint64_t s = splitmix64(splitmix64(cfg.seed) ^ fnv1a(tag));
    seeds[tag] = s;
    return s;
  }

  void record_caps(const std::string& tag, std::uint64_t count) { caps[tag] = count; }

  void check(std::string name, bool passed, std::string detail, bool asserted = true) {
    out.criteria.push_back({std::move(name), passed, asserted, std::move(detail)});
  }

  std::vector<double> lambdas(std::vector<double> fallback) const {
    return cfg.lambdas.empty() ? fallback : cfg.lambdas;
  }
  std::vector<double> times(std::vector<double> fallback) const {
    return cfg.times.empty() ? fallback : cfg.times;
  }
  std::uint64_t samples(std::uint64_t fallback) const {
    return cfg.samples == 0 ? fallback : cfg.samples;
  }
  SamplerCaps sampler_caps() const {
    SamplerCaps c;
    c.max_spine = cfg.max_spine;
    return c;
  }
  ProcessOptions process_options() const {
    ProcessOptions o;
    o.max_vertices = cfg.max_vertices;
    return o;
  }
};

std::string tag(const std::string& base, double a) { return base + " " + num(a); }
std::string tag(const std::string& base, double a, double b) {
  return base + " " + num(a) + " " + num(b);
}

// A canonical code, or a marker for a replica that hit a size cap.
struct CodeSample {
  CanonicalCode code;
  char capped = 0;
};

struct Comparison {
  double tv = 0.0;
  double floor = 0.0;
  double overflow_a = 0.0;
  double overflow_b = 0.0;
};

CodeDistribution to_distribution(const std::vector<CodeSample>& xs, std::uint64_t& capped,
                                 double& overflow) {
  CodeDistribution d;
  std::uint64_t over = 0;
  capped = 0;
  for (const CodeSample& x : xs) {
    if (x.capped) {
      ++capped;
      continue;
    }
    over += x.code.overflow ? 1 : 0;
    d.add(x.code);
  }
  overflow = d.empty() ? 0.0 : static_cast<double>(over) / static_cast<double>(d.total());
  return d;
}

Comparison compare(Context& ctx, const std::string& name, const std::vector<CodeSample>& a,
                   const std::string& tag_a, const std::vector<CodeSample>& b,
                   const std::string& tag_b) {
  Comparison c;
  std::uint64_t capped_a = 0;
  std::uint64_t capped_b = 0;
  const CodeDistribution da = to_distribution(a, capped_a, c.overflow_a);
  const CodeDistribution db = to_distribution(b, capped_b, c.overflow_b);
  ctx.record_caps(tag_a, capped_a);
  ctx.record_caps(tag_b, capped_b);
  if (da.empty() || db.empty()) throw std::runtime_error(name + ": every replica hit a cap");
  c.tv = tv_distance(da, db);
  RandomStream rng(ctx.seed_for("noise floor " + name));
  c.floor = tv_noise_floor(da, db, rng, kBootstrapResamples, kFloorQuantile).quantile_value;
  return c;
}

std::optional<LimitSample> try_limit_sample(LimitModel model, double lambda, RandomStream& rng,
                                            const SamplerCaps& caps) {
  try {
    return model == LimitModel::kM ? sample_m_lambda(lambda, rng, caps)
                                   : sample_g_lambda(lambda, rng, caps);
  } catch (const SamplerCapExceeded&) {
    return std::nullopt;
  }
}

std::vector<CodeSample> m_codes(Context& ctx, double lambda, std::uint64_t n,
                                const std::string& t) {
  const SamplerCaps caps = ctx.sampler_caps();
  const std::size_t cap = ctx.cfg.canonical_cap;
  return run_replicas(n, ctx.seed_for(t), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    auto s = try_limit_sample(LimitModel::kM, lambda, rng, caps);
    return s ? CodeSample{canonical_form(s->graph, cap), 0} : CodeSample{{}, 1};
  });
}

std::string fmt_check(double value, const char* op, double bound) {
  return num(value) + " " + op + " " + num(bound);
}

void require_positive(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

void require_non_negative(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be non-negative");
  }
}

// ---------------------------------------------------------------------------

void cmd_sample(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double lambda = ctx.lambdas({1.0}).front();
  const double t = ctx.times({1.0}).front();
  const std::uint64_t n = ctx.samples(10);
  require_positive({lambda}, "lambda");
  require_non_negative({t}, "t");
  if (cfg.kind != "m" && cfg.kind != "g" && cfg.kind != "cluster") {
    throw std::invalid_argument("sample kind must be m, g or cluster");
  }
  struct Result {
    std::string doc;
    Json diag;
    char capped = 0;
  };
  const SamplerCaps caps = ctx.sampler_caps();
  const ProcessOptions opts = ctx.process_options();
  auto results = run_replicas(
      n, ctx.seed_for("sample " + cfg.kind), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
        Result r;
        if (cfg.kind == "cluster") {
          try {
            r.doc = to_json(run_cluster_process(RootedMultigraph(), lambda, t, rng, opts));
          } catch (const CapExceeded&) {
            r.capped = 1;
          }
          return r;
        }
        const LimitModel model = cfg.kind == "m" ? LimitModel::kM : LimitModel::kG;
        SamplerDiagnostics d;
        try {
          LimitSample s = model == LimitModel::kM ? sample_m_lambda(lambda, rng, caps)
                                                  : sample_g_lambda(lambda, rng, caps);
          r.doc = to_json(s.graph);
          d = std::move(s.diagnostics);
        } catch (const SamplerCapExceeded& e) {
          r.capped = 1;
          d = e.diagnostics();
        }
        r.diag = Json{{"spine_length", d.spine_length},
                      {"revelation_rounds", d.revelation_rounds},
                      {"component_reach", d.component_reach},
                      {"revealed_nodes", d.revealed_nodes},
                      {"component_size", d.component_size},
                      {"stub_counts", d.stub_counts},
                      {"fresh_stubs", d.fresh_stubs},
                      {"cap_exceeded", r.capped != 0}};
        return r;
      });

  std::uint64_t capped = 0;
  std::ostringstream table;
  Json docs = Json::array();
  Json diags = Json::array();
  for (const Result& r : results) {
    if (r.capped) ++capped;
    if (cfg.kind != "cluster") diags.push_back(r.diag);
    if (r.capped) continue;
    if (cfg.format == "json") {
      docs.push_back(Json::parse(r.doc));
    } else {
      table << r.doc << '\n';
    }
  }
  ctx.out.table = cfg.format == "json" ? docs.dump(2) + "\n" : table.str();
  if (cfg.diagnostics) ctx.out.diagnostics = diags.dump(2) + "\n";
  ctx.record_caps("sample " + cfg.kind, capped);
  const double frac = static_cast<double>(capped) / static_cast<double>(n);
  ctx.check("sample_cap_failures", frac <= 0.01, fmt_check(frac, "<=", 0.01));
}

void cmd_yule(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const auto times = ctx.times({0.5, 1.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative(times, "t");
  const ProcessOptions opts = ctx.process_options();
  Table table({"t", "n", "p_single", "p_single_expected", "mean_size", "mean_expected", "chi2",
               "dof", "p_value", "tv"});
  for (double t : times) {
    auto sizes = run_replicas(n, ctx.seed_for(tag("yule", t)), ctx.threads,
                              [&](RandomStream& rng, std::uint64_t) {
                                return static_cast<std::int64_t>(
                                    run_full_process(RootedMultigraph(), lambda, t, rng, opts)
                                        .graph()
                                        .vertex_count());
                              });
    IntDistribution d;
    MeanAccumulator mean;
    for (auto s : sizes) {
      d.add(s);
      mean.add(static_cast<double>(s));
    }
    const double p = std::exp(-t);
    const FitResult fit = fit_geometric(d, p);
    table.add({t, static_cast<std::int64_t>(n), d.probability(1), p, mean.mean(), std::exp(t),
               fit.statistic, static_cast<std::int64_t>(fit.dof), fit.p_value, fit.tv});
    ctx.check("yule_size_geometric t=" + num(t), fit.p_value > 0.01,
              "p-value " + fmt_check(fit.p_value, ">", 0.01));
  }
  ctx.out.table = table.render(ctx.cfg.format);
}

std::vector<double> truncated_poisson(double mean) {
  std::vector<double> pmf;
  double mass = 0.0;
  for (std::int64_t k = 0; 1.0 - mass > 1e-13 || static_cast<double>(k) < mean; ++k) {
    pmf.push_back(poisson_pmf(mean, k));
    mass += pmf.back();
    if (k > 100'000) break;
  }
  return pmf;
}

void cmd_chain(Context& ctx) {
  const double lambda = ctx.lambdas({2.0}).front();
  const std::uint64_t n = ctx.samples(100'000);
  const std::size_t burn_in = 100;
  require_positive({lambda}, "lambda");
  auto pairs = run_replicas(n, ctx.seed_for(tag("chain", lambda)), ctx.threads,
                            [&](RandomStream& rng, std::uint64_t) {
                              const std::uint64_t x0 = rng.poisson(lambda);
                              const auto one = simulate_degree_chain(lambda, x0, 1, rng);
                              const auto long_run = simulate_degree_chain(lambda, 0, burn_in, rng);
                              return std::pair<std::int64_t, std::int64_t>(
                                  static_cast<std::int64_t>(one.back()),
                                  static_cast<std::int64_t>(long_run.back()));
                            });
  IntDistribution first;
  IntDistribution last;
  for (auto [a, b] : pairs) {
    first.add(a);
    last.add(b);
  }
  Table table({"check", "lambda", "n", "chi2", "dof", "p_value", "tv"});
  const FitResult f1 = fit_poisson(first, lambda);
  const FitResult f2 = fit_poisson(last, lambda);
  const double tv_exact = tv_to_pmf(last, truncated_poisson(lambda));
  table.add({std::string("one_step"), lambda, static_cast<std::int64_t>(n), f1.statistic,
             static_cast<std::int64_t>(f1.dof), f1.p_value, f1.tv});
  table.add({std::string("burn_in_100"), lambda, static_cast<std::int64_t>(n), f2.statistic,
             static_cast<std::int64_t>(f2.dof), f2.p_value, tv_exact});
  ctx.check("chain_one_step_poisson", f1.p_value > 0.01,
            "p-value " + fmt_check(f1.p_value, ">", 0.01));
  ctx.check("chain_burn_in_tv", tv_exact < 0.02, "tv " + fmt_check(tv_exact, "<", 0.02));
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_root_degree(Context& ctx) {
  const auto lambdas = ctx.lambdas({0.5, 1.0, 2.0});
  const double t = ctx.times({12.0}).front();
  const std::uint64_t n = ctx.samples(100'000);
  require_positive(lambdas, "lambda");
  require_non_negative({t}, "t");
  const SamplerCaps caps = ctx.sampler_caps();
  const ProcessOptions opts = ctx.process_options();
  Table table({"lambda", "n", "mean_degree", "chi2", "dof", "p_value", "tv_poisson",
               "cluster_t", "tv_cluster", "noise_floor"});
  for (double lambda : lambdas) {
    const std::string tm = tag("root degree m", lambda);
    const std::string tc = tag("root degree cluster", lambda, t);
    auto m = run_replicas(n, ctx.seed_for(tm), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      auto s = try_limit_sample(LimitModel::kM, lambda, rng, caps);
      return s ? static_cast<std::int64_t>(s->graph.degree(0)) : std::int64_t{-1};
    });
    auto c = run_replicas(n, ctx.seed_for(tc), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      try {
        const RootedMultigraph g = run_cluster_process(RootedMultigraph(), lambda, t, rng, opts);
        return static_cast<std::int64_t>(g.degree(g.root()));
      } catch (const CapExceeded&) {
        return std::int64_t{-1};
      }
    });
    IntDistribution dm;
    IntDistribution dc;
    std::uint64_t capped_m = 0;
    std::uint64_t capped_c = 0;
    MeanAccumulator mean;
    for (auto x : m) {
      if (x < 0) {
        ++capped_m;
        continue;
      }
      dm.add(x);
      mean.add(static_cast<double>(x));
    }
    for (auto x : c) {
      if (x < 0) {
        ++capped_c;
      } else {
        dc.add(x);
      }
    }
    ctx.record_caps(tm, capped_m);
    ctx.record_caps(tc, capped_c);
    const FitResult fit = fit_poisson(dm, lambda);
    const double tv = tv_distance(dm, dc);
    RandomStream rng(ctx.seed_for(tag("noise floor root degree", lambda)));
    const double floor = tv_noise_floor(dm, dc, rng, kBootstrapResamples, kFloorQuantile).quantile_value;
    table.add({lambda, static_cast<std::int64_t>(dm.total()), mean.mean(), fit.statistic,
               static_cast<std::int64_t>(fit.dof), fit.p_value, fit.tv, t, tv, floor});
    ctx.check("root_degree_poisson lambda=" + num(lambda), fit.p_value > 0.01,
              "p-value " + fmt_check(fit.p_value, ">", 0.01));
    ctx.check("root_degree_vs_cluster lambda=" + num(lambda), tv < 0.02 + floor,
              "tv " + fmt_check(tv, "<", 0.02 + floor));
  }
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_stationarity(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const double t = ctx.times({1.0}).front();
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative({t}, "t");
  const SamplerCaps caps = ctx.sampler_caps();
  const ProcessOptions opts = ctx.process_options();
  const std::size_t cap = ctx.cfg.canonical_cap;
  const std::string ta = tag("stationarity m", lambda);
  const std::string tb = tag("stationarity evolved", lambda, t);
  auto a = m_codes(ctx, lambda, n, ta);
  auto b = run_replicas(n, ctx.seed_for(tb), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    auto s = try_limit_sample(LimitModel::kM, lambda, rng, caps);
    if (!s) return CodeSample{{}, 1};
    try {
      return CodeSample{canonical_form(evolve(s->graph, lambda, t, rng, opts), cap), 0};
    } catch (const CapExceeded&) {
      return CodeSample{{}, 1};
    }
  });
  const Comparison c = compare(ctx, "stationarity", a, ta, b, tb);
  const double threshold = 0.03 + c.floor;
  Table table({"lambda", "t", "n", "tv", "noise_floor", "threshold", "overflow_m", "overflow_evolved"});
  table.add({lambda, t, static_cast<std::int64_t>(n), c.tv, c.floor, threshold, c.overflow_a,
             c.overflow_b});
  ctx.check("stationarity_tv", c.tv < threshold, "tv " + fmt_check(c.tv, "<", threshold));
  ctx.check("stationarity_overflow_mass", std::max(c.overflow_a, c.overflow_b) < 0.01,
            "overflow " + fmt_check(std::max(c.overflow_a, c.overflow_b), "<", 0.01));
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_convergence(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  auto times = ctx.times({1.0, 2.0, 4.0, 8.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative(times, "t");
  std::sort(times.begin(), times.end());
  const ProcessOptions opts = ctx.process_options();
  const std::size_t cap = ctx.cfg.canonical_cap;
  const std::string tm = tag("convergence m", lambda);
  const std::string tc = tag("convergence cluster", lambda);
  auto m = m_codes(ctx, lambda, n, tm);
  auto traj = run_replicas(n, ctx.seed_for(tc), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    std::vector<CodeSample> codes(times.size(), CodeSample{{}, 1});
    try {
      auto snaps = run_cluster_snapshots(RootedMultigraph(), lambda, times, rng, opts);
      for (std::size_t i = 0; i < snaps.size(); ++i) codes[i] = {canonical_form(snaps[i], cap), 0};
    } catch (const CapExceeded&) {
    }
    return codes;
  });
  Table table({"lambda", "t", "n", "tv", "noise_floor", "overflow"});
  Series series{"TV to M(" + num(lambda) + ")", {}};
  std::vector<Comparison> cs;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<CodeSample> at(n);
    for (std::uint64_t r = 0; r < n; ++r) at[r] = traj[r][i];
    const Comparison c =
        compare(ctx, "convergence t=" + num(times[i]), at, tag("convergence cluster", lambda, times[i]), m, tm);
    cs.push_back(c);
    table.add({lambda, times[i], static_cast<std::int64_t>(n), c.tv, c.floor, c.overflow_a});
    series.points.emplace_back(times[i], c.tv);
  }
  for (std::size_t i = 1; i < cs.size(); ++i) {
    const double bound = cs[i - 1].tv + cs[i].floor;
    ctx.check("convergence_monotone t=" + num(times[i]), cs[i].tv <= bound,
              "tv " + fmt_check(cs[i].tv, "<=", bound));
  }
  if (!cs.empty()) {
    const double bound = 0.05 + cs.back().floor;
    ctx.check("convergence_final t=" + num(times.back()), cs.back().tv < bound,
              "tv " + fmt_check(cs.back().tv, "<", bound));
  }
  ctx.out.table = table.render(ctx.cfg.format);
  if (ctx.cfg.svg) {
    ctx.out.svg = line_chart({"Convergence to the invariant law", "t", "TV distance", false, false,
                              {series}});
  }
}

void cmd_cross_validate(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const auto times = ctx.times({1.0, 2.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative(times, "t");
  const ProcessOptions opts = ctx.process_options();
  const std::size_t cap = ctx.cfg.canonical_cap;
  Table table({"lambda", "t", "n", "tv", "noise_floor", "threshold"});
  for (double t : times) {
    const std::string te = tag("cross validate events", lambda, t);
    const std::string tt = tag("cross validate tree", lambda, t);
    auto a = run_replicas(n, ctx.seed_for(te), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      try {
        return CodeSample{canonical_form(run_cluster_process(RootedMultigraph(), lambda, t, rng, opts), cap), 0};
      } catch (const CapExceeded&) {
        return CodeSample{{}, 1};
      }
    });
    auto b = run_replicas(n, ctx.seed_for(tt), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      try {
        return CodeSample{canonical_form(sample_gtcirc_via_tree(lambda, t, rng, opts.max_vertices), cap), 0};
      } catch (const CapExceeded&) {
        return CodeSample{{}, 1};
      }
    });
    const Comparison c = compare(ctx, "cross validate t=" + num(t), a, te, b, tt);
    const double threshold = 0.02 + c.floor;
    table.add({lambda, t, static_cast<std::int64_t>(n), c.tv, c.floor, threshold});
    ctx.check("cross_validate t=" + num(t), c.tv < threshold, "tv " + fmt_check(c.tv, "<", threshold));
  }
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_prefix_shift(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const double t = ctx.times({1.0}).front();
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda, t}, "lambda and t");
  const SamplerCaps caps = ctx.sampler_caps();
  const std::size_t cap = ctx.cfg.canonical_cap;
  const std::string tp = tag("prefix", lambda, t);
  const std::string tm = tag("prefix plain", lambda);
  auto a = run_replicas(n, ctx.seed_for(tp), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    try {
      return CodeSample{canonical_form(sample_m_lambda_with_prefix(lambda, t, rng, caps).graph, cap), 0};
    } catch (const SamplerCapExceeded&) {
      return CodeSample{{}, 1};
    }
  });
  auto b = m_codes(ctx, lambda, n, tm);
  const Comparison c = compare(ctx, "prefix", a, tp, b, tm);
  const double threshold = 0.02 + c.floor;
  Table table({"lambda", "t", "n", "tv", "noise_floor", "threshold"});
  table.add({lambda, t, static_cast<std::int64_t>(n), c.tv, c.floor, threshold});
  ctx.check("prefix_shift_tv", c.tv < threshold, "tv " + fmt_check(c.tv, "<", threshold));
  ctx.out.table = table.render(ctx.cfg.format);
}

DoubleEdgeStat parallel_double_edge(Context& ctx, LimitModel model, double lambda,
                                    std::uint64_t n, const std::string& t) {
  const std::uint64_t seed = ctx.seed_for(t);
  const SamplerCaps caps = ctx.sampler_caps();
  const std::uint64_t budget = 1000 * n;
  DoubleEdgeStat s;
  std::uint64_t capped = 0;
  std::uint64_t offset = 0;
  while (s.conditional < n) {
    if (offset >= budget) throw std::runtime_error("double-edge: sample budget exhausted");
    const std::uint64_t batch = std::min<std::uint64_t>(budget - offset, std::max<std::uint64_t>(4096, 8 * (n - s.conditional)));
    // Replica i of the stream uses index offset + i.
    auto flags = run_replicas(batch, seed, ctx.threads, [&](RandomStream&, std::uint64_t i) {
      RandomStream rng = RandomStream::derive(seed, offset + i);
      auto x = try_limit_sample(model, lambda, rng, caps);
      if (!x) return 3;
      auto hit = root_double_edge(x->graph);
      return hit ? (*hit ? 1 : 0) : 2;
    });
    for (int f : flags) {
      if (s.conditional == n) break;
      ++s.drawn;
      if (f == 3) {
        ++capped;
      } else if (f != 2) {
        ++s.conditional;
        s.hits += static_cast<std::uint64_t>(f);
      }
    }
    offset += batch;
  }
  ctx.record_caps(t, capped);
  s.frequency = static_cast<double>(s.hits) / static_cast<double>(s.conditional);
  s.stderr_ = std::sqrt(s.frequency * (1.0 - s.frequency) / static_cast<double>(s.conditional));
  std::tie(s.ci_lo, s.ci_hi) = wilson_ci(s.hits, s.conditional, 3.0);
  return s;
}

void cmd_double_edge(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const std::uint64_t n = ctx.samples(10'000);
  require_positive({lambda}, "lambda");
  const DoubleEdgeStat g = parallel_double_edge(ctx, LimitModel::kG, lambda, n, tag("double edge g", lambda));
  const DoubleEdgeStat m = parallel_double_edge(ctx, LimitModel::kM, lambda, n, tag("double edge m", lambda));
  constexpr double kG = 2.0 / 7.0;
  Table table({"model", "lambda", "conditional", "drawn", "hits", "frequency", "stderr", "ci_lo",
               "ci_hi", "reference"});
  auto row = [&](const char* model, const DoubleEdgeStat& s, double ref) {
    table.add({std::string(model), lambda, static_cast<std::int64_t>(s.conditional),
               static_cast<std::int64_t>(s.drawn), static_cast<std::int64_t>(s.hits), s.frequency,
               s.stderr_, s.ci_lo, s.ci_hi, ref});
  };
  row("g", g, kG);
  row("m", m, 0.25);
  ctx.check("double_edge_g_two_sevenths", std::abs(g.frequency - kG) <= 3 * g.stderr_,
            "|" + num(g.frequency) + " - 2/7| " + fmt_check(std::abs(g.frequency - kG), "<=", 3 * g.stderr_));
  ctx.check("double_edge_m_upper", m.frequency + 3 * m.stderr_ < 0.26,
            "upper " + fmt_check(m.frequency + 3 * m.stderr_, "<", 0.26));
  ctx.check("double_edge_m_below_g", m.frequency + 3 * m.stderr_ < g.frequency - 3 * g.stderr_,
            "m upper " + fmt_check(m.frequency + 3 * m.stderr_, "<", g.frequency - 3 * g.stderr_));
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_crossing_rate(Context& ctx) {
  const std::uint64_t trees = ctx.samples(1000);
  const double max_age = ctx.times({5.0}).front();
  const std::size_t cuts = 5;
  require_positive({max_age}, "t");
  struct Result {
    double max_z = 0.0;
    double max_diff = 0.0;
    std::int64_t violations = 0;
  };
  auto results = run_replicas(trees, ctx.seed_for("crossing rate"), ctx.threads,
                              [&](RandomStream& rng, std::uint64_t) {
    Result r;
    const BinaryTree tree = sample_yule_tree(max_age * rng.uniform(), rng, 1'000'000);
    if (tree.size() < 2) return r;
    const std::vector<NodeId> leaves = tree.leaves();
    for (std::size_t k = 0; k < cuts; ++k) {
      const auto child = static_cast<NodeId>(1 + rng.uniform_index(tree.size() - 1));
      const double z = crossing_rate(tree, child);
      auto below = [&](NodeId x) {
        while (x != kNoNode && x != child) x = tree.parent(x);
        return x == child;
      };
      double brute = 0.0;
      for (NodeId x : leaves) {
        if (!below(x)) continue;
        for (NodeId y : leaves) {
          if (below(y)) continue;
          brute += std::ldexp(1.0, 1 - static_cast<int>(tree_distance(tree, x, y)));
        }
      }
      r.max_z = std::max(r.max_z, z);
      r.max_diff = std::max(r.max_diff, std::abs(z - brute));
      if (z > 1.0) ++r.violations;
    }
    return r;
  });
  Result all;
  for (const Result& r : results) {
    all.max_z = std::max(all.max_z, r.max_z);
    all.max_diff = std::max(all.max_diff, r.max_diff);
    all.violations += r.violations;
  }
  Table table({"trees", "cuts", "max_age", "max_z", "max_abs_diff", "violations"});
  table.add({static_cast<std::int64_t>(trees), static_cast<std::int64_t>(trees * cuts), max_age,
             all.max_z, all.max_diff, all.violations});
  ctx.check("crossing_rate_at_most_one", all.violations == 0,
            "max z " + fmt_check(all.max_z, "<=", 1.0));
  ctx.check("crossing_rate_product_formula", all.max_diff <= 1e-12,
            "max diff " + fmt_check(all.max_diff, "<=", 1e-12));
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_spine_tail(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  const std::vector<std::size_t> levels{5, 10, 20};
  const SamplerCaps caps = ctx.sampler_caps();
  const std::string t = tag("spine tail", lambda);
  // Capped replicas are reported with lengths past every level.
  auto lengths = run_replicas(n, ctx.seed_for(t), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    auto s = try_limit_sample(LimitModel::kM, lambda, rng, caps);
    if (!s) return std::pair<std::int64_t, std::int64_t>(-1, -1);
    return std::pair<std::int64_t, std::int64_t>(
        static_cast<std::int64_t>(s->diagnostics.spine_length),
        static_cast<std::int64_t>(s->diagnostics.revelation_rounds));
  });
  std::uint64_t capped = 0;
  for (auto [a, b] : lengths) capped += a < 0 ? 1 : 0;
  ctx.record_caps(t, capped);
  const double nd = static_cast<double>(n);
  Table table({"lambda", "n", "L", "p_rounds", "stderr_rounds", "envelope", "p_spine",
               "stderr_spine", "p_spine_exact"});
  Series rounds{"revelation rounds", {}};
  Series spine{"spine length", {}};
  Series env{"envelope", {}};
  for (std::size_t L : levels) {
    const auto Ld = static_cast<std::int64_t>(L);
    double over_rounds = 0.0;
    double over_spine = 0.0;
    for (auto [s, r] : lengths) {
      over_spine += (s < 0 || s > Ld) ? 1.0 : 0.0;
      over_rounds += (r < 0 || r > Ld) ? 1.0 : 0.0;
    }
    const double pr = over_rounds / nd;
    const double ps = over_spine / nd;
    const double sr = std::sqrt(pr * (1.0 - pr) / nd);
    const double ss = std::sqrt(ps * (1.0 - ps) / nd);
    const double envelope = std::pow(1.0 - std::exp(-lambda), static_cast<double>(L));
    const double exact = stub_chain_survival(lambda, L);
    const double se_exact = std::sqrt(exact * (1.0 - exact) / nd);
    table.add({lambda, static_cast<std::int64_t>(n), Ld, pr, sr, envelope, ps, ss, exact});
    rounds.points.emplace_back(static_cast<double>(L), pr);
    spine.points.emplace_back(static_cast<double>(L), ps);
    env.points.emplace_back(static_cast<double>(L), envelope);
    ctx.check("revelation_rounds_tail L=" + std::to_string(L), pr <= envelope + 3 * sr,
              "tail " + fmt_check(pr, "<=", envelope + 3 * sr));
    ctx.check("spine_length_tail_exact L=" + std::to_string(L),
              std::abs(ps - exact) <= 3 * se_exact + 1e-12,
              "|" + num(ps) + " - " + num(exact) + "| " +
                  fmt_check(std::abs(ps - exact), "<=", 3 * se_exact));
    ctx.check("spine_length_under_envelope L=" + std::to_string(L), ps <= envelope + 3 * ss,
              "tail " + fmt_check(ps, "<=", envelope + 3 * ss), false);
  }
  ctx.out.table = table.render(ctx.cfg.format);
  if (ctx.cfg.svg) {
    ctx.out.svg = line_chart({"Exploration length tails", "L", "P(length > L)", false, true,
                              {rounds, spine, env}});
  }
}

void cmd_singleton_free(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  const auto times = ctx.times({3.0, 5.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative(times, "t");
  const std::size_t max_vertices = ctx.cfg.max_vertices;
  Table table({"lambda", "t", "n", "mean", "stderr", "bound"});
  std::vector<double> means;
  for (double t : times) {
    const std::string tg = tag("singleton free", lambda, t);
    auto sizes = run_replicas(n, ctx.seed_for(tg), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      try {
        return static_cast<std::int64_t>(run_singleton_free(lambda, t, rng, max_vertices));
      } catch (const CapExceeded&) {
        return std::int64_t{-1};
      }
    });
    MeanAccumulator acc;
    std::uint64_t capped = 0;
    for (auto s : sizes) {
      if (s < 0) {
        ++capped;
      } else {
        acc.add(static_cast<double>(s));
      }
    }
    ctx.record_caps(tg, capped);
    const MeanEstimate e = acc.estimate();
    const double bound = std::exp((1.0 - std::exp(-lambda)) * t);
    table.add({lambda, t, static_cast<std::int64_t>(e.n), e.mean, e.stderr_, bound});
    ctx.check("singleton_free_bound t=" + num(t), e.mean - 3 * e.stderr_ <= bound,
              "mean - 3 se " + fmt_check(e.mean - 3 * e.stderr_, "<=", bound));
    means.push_back(e.mean);
  }
  for (std::size_t i = 1; i < means.size(); ++i) {
    ctx.check("singleton_free_grows t=" + num(times[i]), means[i] >= means[i - 1],
              num(means[i]) + " vs " + num(means[i - 1]), false);
  }
  ctx.out.table = table.render(ctx.cfg.format);
}

struct KillSummary {
  std::vector<double> times;
  std::uint64_t killed = 0;
  double old_edges = 0.0;
};

KillSummary kill_runs(Context& ctx, double lambda, double cap, std::uint64_t n) {
  auto rs = run_replicas(n, ctx.seed_for(tag("kill time", lambda, cap)), ctx.threads,
                         [&](RandomStream& rng, std::uint64_t) {
                           return kill_time_all_old_edges(lambda, rng, cap);
                         });
  KillSummary s;
  for (const KillResult& r : rs) {
    s.times.push_back(r.time);
    s.killed += r.killed ? 1 : 0;
    s.old_edges += static_cast<double>(r.old_edges);
  }
  s.old_edges /= static_cast<double>(n);
  return s;
}

void cmd_kill_time(Context& ctx) {
  const auto lambdas = ctx.lambdas({1.0});
  const double cap = ctx.times({200.0}).front();
  const std::uint64_t n = ctx.samples(10'000);
  require_positive(lambdas, "lambda");
  require_positive({cap}, "time cap");
  Table table({"lambda", "time_cap", "n", "mean_old_edges", "killed", "frac_killed", "mean_time",
               "median_time"});
  auto add_row = [&](double lambda, const KillSummary& s) {
    std::vector<double> sorted = s.times;
    std::sort(sorted.begin(), sorted.end());
    const double frac = static_cast<double>(s.killed) / static_cast<double>(n);
    table.add({lambda, cap, static_cast<std::int64_t>(n), s.old_edges,
               static_cast<std::int64_t>(s.killed), frac, mean_ci(s.times).mean,
               sorted[sorted.size() / 2]});
    return frac;
  };
  for (double lambda : lambdas) {
    const double frac = add_row(lambda, kill_runs(ctx, lambda, cap, n));
    ctx.check("old_edges_killed lambda=" + num(lambda), frac >= 0.999,
              "killed fraction " + fmt_check(frac, ">=", 0.999));
  }
  // Reported only: kill times at lambda = 0.5 against lambda = 2.
  const KillSummary lo = kill_runs(ctx, 0.5, cap, n);
  const KillSummary hi = kill_runs(ctx, 2.0, cap, n);
  add_row(0.5, lo);
  add_row(2.0, hi);
  const TestResult mw = mann_whitney(lo.times, hi.times);
  const double mean_lo = mean_ci(lo.times).mean;
  const double mean_hi = mean_ci(hi.times).mean;
  ctx.check("kill_time_increases_with_lambda", mw.p_value < 0.01 && mean_hi > mean_lo,
            "Mann-Whitney p " + num(mw.p_value) + ", means " + num(mean_lo) + " vs " + num(mean_hi),
            false);
  ctx.out.table = table.render(ctx.cfg.format);
}

void cmd_threshold(Context& ctx) {
  const double lambda = ctx.lambdas({8.0}).front();
  require_positive({lambda}, "lambda");
  const double t_lo = 0.6 * lambda;
  const double t_hi = 1.2 * lambda;
  auto times = ctx.times({0.0, 0.3 * lambda, t_lo, 0.9 * lambda, t_hi});
  require_non_negative(times, "t");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const std::uint64_t n = ctx.samples(2000);
  const ProcessOptions opts = ctx.process_options();
  const std::string tg = tag("threshold", lambda);
  // Per time: bit 0 connected, bit 1 has an isolated vertex; 4 marks a cap.
  auto flags = run_replicas(n, ctx.seed_for(tg), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    std::vector<int> f(times.size(), 4);
    try {
      FullProcessState state(RootedMultigraph(), lambda, rng, opts);
      for (std::size_t i = 0; i < times.size(); ++i) {
        state.advance_to(times[i], rng);
        f[i] = (is_connected(state.graph()) ? 1 : 0) | (has_isolated_vertex(state.graph()) ? 2 : 0);
      }
    } catch (const CapExceeded&) {
    }
    return f;
  });
  struct Point {
    std::uint64_t n = 0;
    std::uint64_t connected = 0;
    std::uint64_t isolated = 0;
    std::pair<double, double> ci_c;
    std::pair<double, double> ci_i;
    double fc() const { return static_cast<double>(connected) / static_cast<double>(n); }
    double fi() const { return static_cast<double>(isolated) / static_cast<double>(n); }
  };
  Table table({"lambda", "t", "n", "frac_connected", "connected_lo", "connected_hi",
               "frac_isolated", "isolated_lo", "isolated_hi"});
  std::map<double, Point> points;
  Series sc{"connected", {}};
  Series si{"has isolated vertex", {}};
  std::uint64_t capped = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    Point p;
    for (const auto& f : flags) {
      if (f[i] == 4) {
        ++capped;
        continue;
      }
      ++p.n;
      p.connected += f[i] & 1;
      p.isolated += (f[i] >> 1) & 1;
    }
    if (p.n == 0) throw std::runtime_error("threshold: every replica hit the vertex cap");
    p.ci_c = wilson_ci(p.connected, p.n, 3.0);
    p.ci_i = wilson_ci(p.isolated, p.n, 3.0);
    table.add({lambda, times[i], static_cast<std::int64_t>(p.n), p.fc(), p.ci_c.first,
               p.ci_c.second, p.fi(), p.ci_i.first, p.ci_i.second});
    sc.points.emplace_back(times[i], p.fc());
    si.points.emplace_back(times[i], p.fi());
    points[times[i]] = p;
  }
  ctx.record_caps(tg, capped);
  if (points.count(0.0)) {
    ctx.check("threshold_start_connected", points[0.0].connected == points[0.0].n,
              "t = 0 connected fraction " + num(points[0.0].fc()), false);
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const Point& a = points[times[i - 1]];
    const Point& b = points[times[i]];
    ctx.check("threshold_isolated_nondecreasing t=" + num(times[i]), b.ci_i.second >= a.ci_i.first,
              num(b.fi()) + " vs " + num(a.fi()), false);
  }
  if (points.count(t_lo) && points.count(t_hi)) {
    const Point& a = points[t_lo];
    const Point& b = points[t_hi];
    const double gap_c = a.fc() - b.fc();
    const double gap_i = b.fi() - a.fi();
    ctx.check("threshold_connected_gap", gap_c >= 0.3 && b.ci_c.second < a.ci_c.first,
              "gap " + fmt_check(gap_c, ">=", 0.3) + ", 3-sigma intervals [" + num(b.ci_c.first) +
                  ", " + num(b.ci_c.second) + "] and [" + num(a.ci_c.first) + ", " +
                  num(a.ci_c.second) + "]");
    ctx.check("threshold_isolated_gap", gap_i >= 0.3 && a.ci_i.second < b.ci_i.first,
              "gap " + fmt_check(gap_i, ">=", 0.3) + ", 3-sigma intervals [" + num(a.ci_i.first) +
                  ", " + num(a.ci_i.second) + "] and [" + num(b.ci_i.first) + ", " +
                  num(b.ci_i.second) + "]");
  }
  ctx.out.table = table.render(ctx.cfg.format);
  if (ctx.cfg.svg) {
    ctx.out.svg = line_chart({"Full process at lambda = " + num(lambda), "t", "fraction", false,
                              false, {sc, si}});
  }
}

void cmd_mean_size(Context& ctx) {
  const auto lambdas = ctx.lambdas({0.5, 1.0, 2.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive(lambdas, "lambda");
  const SamplerCaps caps = ctx.sampler_caps();
  Table table({"lambda", "n", "mean", "stderr", "ci_lo", "ci_hi"});
  Series series{"mean |M(lambda)|", {}};
  std::map<double, MeanEstimate> full;
  for (double lambda : lambdas) {
    const std::string tg = tag("mean size", lambda);
    // The 2n estimate extends the n estimate with n further replicas.
    auto sizes = run_replicas(2 * n, ctx.seed_for(tg), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
      auto s = try_limit_sample(LimitModel::kM, lambda, rng, caps);
      return s ? static_cast<double>(s->graph.vertex_count()) : -1.0;
    });
    MeanAccumulator first;
    MeanAccumulator both;
    std::uint64_t capped = 0;
    for (std::uint64_t i = 0; i < 2 * n; ++i) {
      if (sizes[i] < 0) {
        ++capped;
        continue;
      }
      if (i < n) first.add(sizes[i]);
      both.add(sizes[i]);
    }
    ctx.record_caps(tg, capped);
    const MeanEstimate a = first.estimate();
    const MeanEstimate b = both.estimate();
    for (const MeanEstimate& e : {a, b}) {
      table.add({lambda, static_cast<std::int64_t>(e.n), e.mean, e.stderr_, e.lo, e.hi});
    }
    series.points.emplace_back(lambda, b.mean);
    full[lambda] = b;
    ctx.check("mean_size_doubling lambda=" + num(lambda), std::abs(b.mean - a.mean) < 2 * a.stderr_,
              "|change| " + fmt_check(std::abs(b.mean - a.mean), "<", 2 * a.stderr_));
  }
  if (full.size() >= 2) {
    const MeanEstimate& lo = full.begin()->second;
    const MeanEstimate& hi = full.rbegin()->second;
    ctx.check("mean_size_increasing", hi.mean - 3 * hi.stderr_ > lo.mean + 3 * lo.stderr_,
              num(full.rbegin()->first) + ": " + num(hi.mean) + " vs " + num(full.begin()->first) +
                  ": " + num(lo.mean),
              false);
  }
  ctx.out.table = table.render(ctx.cfg.format);
  if (ctx.cfg.svg) {
    ctx.out.svg = line_chart({"Mean size of the invariant component", "lambda", "mean size", true,
                              true, {series}});
  }
}

void cmd_plateau(Context& ctx) {
  const double lambda = ctx.lambdas({1.0}).front();
  auto times = ctx.times({10.0, 12.0});
  const std::uint64_t n = ctx.samples(100'000);
  require_positive({lambda}, "lambda");
  require_non_negative(times, "t");
  std::sort(times.begin(), times.end());
  const ProcessOptions opts = ctx.process_options();
  const std::string tg = tag("plateau", lambda);
  auto sizes = run_replicas(n, ctx.seed_for(tg), ctx.threads, [&](RandomStream& rng, std::uint64_t) {
    std::vector<double> out(times.size(), -1.0);
    try {
      auto snaps = run_cluster_snapshots(RootedMultigraph(), lambda, times, rng, opts);
      for (std::size_t i = 0; i < snaps.size(); ++i) out[i] = static_cast<double>(snaps[i].vertex_count());
    } catch (const CapExceeded&) {
    }
    return out;
  });
  Table table({"lambda", "t", "n", "mean", "stderr", "ci_lo", "ci_hi"});
  std::vector<MeanEstimate> est;
  std::uint64_t capped = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    MeanAccumulator acc;
    for (const auto& s : sizes) {
      if (s[i] < 0) {
        ++capped;
      } else {
        acc.add(s[i]);
      }
    }
    est.push_back(acc.estimate());
    table.add({lambda, times[i], static_cast<std::int64_t>(est.back().n), est.back().mean,
               est.back().stderr_, est.back().lo, est.back().hi});
  }
  ctx.record_caps(tg, capped);
  if (est.size() >= 2) {
    const MeanEstimate& a = est[est.size() - 2];
    const MeanEstimate& b = est.back();
    const double tol = 2 * std::max(a.stderr_, b.stderr_);
    ctx.check("mean_size_plateau t=" + num(times[times.size() - 2]) + ".." + num(times.back()),
              std::abs(b.mean - a.mean) < tol, "|change| " + fmt_check(std::abs(b.mean - a.mean), "<", tol));
  }
  ctx.out.table = table.render(ctx.cfg.format);
}

using Command = void (*)(Context&);

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> commands{
      {"sample", cmd_sample},
      {"yule", cmd_yule},
      {"chain", cmd_chain},
      {"root-degree", cmd_root_degree},
      {"stationarity", cmd_stationarity},
      {"convergence", cmd_convergence},
      {"cross-validate", cmd_cross_validate},
      {"prefix-shift", cmd_prefix_shift},
      {"double-edge", cmd_double_edge},
      {"crossing-rate", cmd_crossing_rate},
      {"spine-tail", cmd_spine_tail},
      {"singleton-free", cmd_singleton_free},
      {"kill-time", cmd_kill_time},
      {"threshold", cmd_threshold},
      {"mean-size", cmd_mean_size},
      {"plateau", cmd_plateau},
  };
  return commands;
}

Json config_json(const ExperimentConfig& c) {
  return Json{{"command", c.command},
              {"kind", c.kind},
              {"lambdas", c.lambdas},
              {"times", c.times},
              {"samples", c.samples},
              {"seed", c.seed},
              {"threads", c.threads},
              {"max_spine", c.max_spine},
              {"max_vertices", c.max_vertices},
              {"canonical_cap", c.canonical_cap},
              {"format", c.format},
              {"diagnostics", c.diagnostics},
              {"svg", c.svg}};
}

}  // namespace

bool ExperimentOutput::passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const Criterion& c) { return c.passed || !c.asserted; });
}

std::vector<std::string> experiment_commands() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  auto it = registry().find(config.command);
  if (it == registry().end()) throw std::invalid_argument("unknown command: " + config.command);
  if (config.format != "csv" && config.format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
  if (config.max_spine == 0 || config.max_vertices == 0) {
    throw std::invalid_argument("caps must be positive");
  }
  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  Context ctx{config, threads};
  const auto start = std::chrono::steady_clock::now();
  it->second(ctx);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json criteria = Json::array();
  for (const Criterion& c : ctx.out.criteria) {
    criteria.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"asserted", c.asserted}, {"detail", c.detail}});
  }
  Json manifest{{"artifact", "vsplit"},
                {"version", VSPLIT_VERSION},
                {"config", config_json(config)},
                {"threads_used", threads},
                {"seeds", ctx.seeds},
                {"cap_exceeded", ctx.caps},
                {"wall_clock_seconds", wall},
                {"criteria", criteria},
                {"passed", ctx.out.passed()}};
  ctx.out.manifest = manifest.dump(2) + "\n";
  return std::move(ctx.out);
}

ExperimentConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text.empty() ? std::string("{}") : text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig c;
  try {
    auto scalar_or_list = [&](const char* key, std::vector<double>& out) {
      if (!j.contains(key)) return;
      const Json& v = j.at(key);
      out = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    };
    if (j.contains("command")) c.command = j.at("command").get<std::string>();
    if (j.contains("kind")) c.kind = j.at("kind").get<std::string>();
    scalar_or_list("lambdas", c.lambdas);
    scalar_or_list("lambda", c.lambdas);
    scalar_or_list("times", c.times);
    scalar_or_list("t", c.times);
    if (j.contains("samples")) c.samples = j.at("samples").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("max_spine")) c.max_spine = j.at("max_spine").get<std::size_t>();
    if (j.contains("max_vertices")) c.max_vertices = j.at("max_vertices").get<std::size_t>();
    if (j.contains("canonical_cap")) c.canonical_cap = j.at("canonical_cap").get<std::size_t>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("diagnostics")) c.diagnostics = j.at("diagnostics").get<bool>();
    if (j.contains("svg")) c.svg = j.at("svg").get<bool>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(); }

double stub_chain_survival(double lambda, std::size_t L, std::size_t states) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  // p[x] = P(X_k = x and X_0, ..., X_k > 0).
  std::vector<double> p(states, 0.0);
  for (std::size_t x = 1; x < states; ++x) p[x] = poisson_pmf(lambda, static_cast<std::int64_t>(x));
  std::vector<double> fresh(states);
  for (std::size_t k = 0; k < states; ++k) fresh[k] = poisson_pmf(lambda / 2.0, static_cast<std::int64_t>(k));
  // binom[x][j] = P(Bin(x, 1/2) = j), built row by row.
  std::vector<std::vector<double>> binom(states);
  binom[0] = {1.0};
  for (std::size_t x = 1; x < states; ++x) {
    binom[x].assign(x + 1, 0.0);
    for (std::size_t j = 0; j < x; ++j) {
      binom[x][j] += 0.5 * binom[x - 1][j];
      binom[x][j + 1] += 0.5 * binom[x - 1][j];
    }
  }
  for (std::size_t step = 0; step < L; ++step) {
    std::vector<double> thinned(states, 0.0);
    for (std::size_t x = 1; x < states; ++x) {
      if (p[x] == 0.0) continue;
      for (std::size_t j = 0; j <= x; ++j) thinned[j] += p[x] * binom[x][j];
    }
    std::vector<double> next(states, 0.0);
    for (std::size_t j = 0; j < states; ++j) {
      if (thinned[j] == 0.0) continue;
      for (std::size_t k = 0; j + k < states; ++k) next[j + k] += thinned[j] * fresh[k];
    }
    next[0] = 0.0;
    p = std::move(next);
  }
  double total = 0.0;
  for (double v : p) total += v;
  return total;
}

}  // namespace vsplit

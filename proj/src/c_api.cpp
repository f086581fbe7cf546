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

#include "vsplit/vsplit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "vsplit/canonical.hpp"
#include "vsplit/experiments.hpp"
#include "vsplit/limit_sampler.hpp"
#include "vsplit/multigraph.hpp"
#include "vsplit/processes.hpp"
#include "vsplit/random.hpp"

struct vsplit_graph {
  vsplit::RootedMultigraph g;
};

struct vsplit_rng {
  vsplit::RandomStream r;
};

namespace {

thread_local std::string last_error;

vsplit_status fail(vsplit_status s, const std::string& message) {
  last_error = message;
  return s;
}

// Maps the exception in flight to a status code.
vsplit_status translate() {
  try {
    throw;
  } catch (const vsplit::NoSuchVertex& e) {
    return fail(VSPLIT_NO_SUCH_VERTEX, e.what());
  } catch (const vsplit::ParseError& e) {
    return fail(VSPLIT_PARSE_ERROR, e.what());
  } catch (const vsplit::CapExceeded& e) {
    return fail(VSPLIT_CAP_EXCEEDED, e.what());
  } catch (const vsplit::SamplerCapExceeded& e) {
    return fail(VSPLIT_CAP_EXCEEDED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VSPLIT_OUT_OF_MEMORY, "out of memory");
  } catch (const std::invalid_argument& e) {
    return fail(VSPLIT_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(VSPLIT_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(VSPLIT_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(VSPLIT_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(VSPLIT_INTERNAL_ERROR, "unknown error");
  }
}

template <class Fn>
vsplit_status guarded(Fn&& fn) {
  try {
    fn();
    return VSPLIT_OK;
  } catch (...) {
    return translate();
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string diagnostics_json(const vsplit::SamplerDiagnostics& d) {
  return nlohmann::json{{"spine_length", d.spine_length},
                        {"revelation_rounds", d.revelation_rounds},
                        {"component_reach", d.component_reach},
                        {"revealed_nodes", d.revealed_nodes},
                        {"component_size", d.component_size},
                        {"stub_counts", d.stub_counts},
                        {"fresh_stubs", d.fresh_stubs}}
      .dump();
}

vsplit::ProcessOptions process_options(size_t max_vertices) {
  vsplit::ProcessOptions o;
  if (max_vertices) o.max_vertices = max_vertices;
  return o;
}

vsplit::SamplerCaps sampler_caps(size_t max_spine) {
  vsplit::SamplerCaps c;
  if (max_spine) c.max_spine = max_spine;
  return c;
}

#define VSPLIT_REQUIRE(cond)                                                  \
  do {                                                                        \
    if (!(cond)) return fail(VSPLIT_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* vsplit_version(void) { return VSPLIT_VERSION; }

const char* vsplit_status_name(vsplit_status status) {
  switch (status) {
    case VSPLIT_OK: return "ok";
    case VSPLIT_INVALID_ARGUMENT: return "invalid argument";
    case VSPLIT_NO_SUCH_VERTEX: return "no such vertex";
    case VSPLIT_PARSE_ERROR: return "parse error";
    case VSPLIT_CAP_EXCEEDED: return "cap exceeded";
    case VSPLIT_OUT_OF_MEMORY: return "out of memory";
    case VSPLIT_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* vsplit_last_error(void) { return last_error.c_str(); }

void vsplit_string_free(char* s) { std::free(s); }

vsplit_status vsplit_rng_create(uint64_t seed, vsplit_rng** out) {
  VSPLIT_REQUIRE(out);
  return guarded([&] { *out = new vsplit_rng{vsplit::RandomStream(seed)}; });
}

vsplit_status vsplit_rng_derive(uint64_t master_seed, uint64_t index, vsplit_rng** out) {
  VSPLIT_REQUIRE(out);
  return guarded(
      [&] { *out = new vsplit_rng{vsplit::RandomStream::derive(master_seed, index)}; });
}

void vsplit_rng_destroy(vsplit_rng* rng) { delete rng; }

vsplit_status vsplit_rng_uniform(vsplit_rng* rng, double* out) {
  VSPLIT_REQUIRE(rng && out);
  *out = rng->r.uniform();
  return VSPLIT_OK;
}

vsplit_status vsplit_graph_create_single(vsplit_graph** out) {
  VSPLIT_REQUIRE(out);
  return guarded([&] { *out = new vsplit_graph{vsplit::RootedMultigraph::single()}; });
}

vsplit_status vsplit_graph_clone(const vsplit_graph* g, vsplit_graph** out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = new vsplit_graph{g->g}; });
}

void vsplit_graph_destroy(vsplit_graph* g) { delete g; }

vsplit_status vsplit_graph_from_json(const char* text, vsplit_graph** out) {
  VSPLIT_REQUIRE(text && out);
  return guarded([&] { *out = new vsplit_graph{vsplit::from_json(text)}; });
}

vsplit_status vsplit_graph_to_json(const vsplit_graph* g, char** out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = dup_string(vsplit::to_json(g->g)); });
}

vsplit_status vsplit_graph_vertex_count(const vsplit_graph* g, size_t* out) {
  VSPLIT_REQUIRE(g && out);
  *out = g->g.vertex_count();
  return VSPLIT_OK;
}

vsplit_status vsplit_graph_edge_count(const vsplit_graph* g, uint64_t* out) {
  VSPLIT_REQUIRE(g && out);
  *out = g->g.edge_count();
  return VSPLIT_OK;
}

vsplit_status vsplit_graph_root(const vsplit_graph* g, uint32_t* out) {
  VSPLIT_REQUIRE(g && out);
  *out = g->g.root();
  return VSPLIT_OK;
}

vsplit_status vsplit_graph_vertices(const vsplit_graph* g, uint32_t* ids, size_t capacity,
                                    size_t* count) {
  VSPLIT_REQUIRE(g && count && (ids || capacity == 0));
  return guarded([&] {
    const auto vs = g->g.vertices();
    *count = vs.size();
    for (size_t i = 0; i < vs.size() && i < capacity; ++i) ids[i] = vs[i];
  });
}

vsplit_status vsplit_graph_degree(const vsplit_graph* g, uint32_t v, uint64_t* out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = g->g.degree(v); });
}

vsplit_status vsplit_graph_multiplicity(const vsplit_graph* g, uint32_t u, uint32_t v,
                                        uint32_t* out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = g->g.multiplicity(u, v); });
}

vsplit_status vsplit_graph_split_vertex(vsplit_graph* g, uint32_t v, double lambda,
                                        vsplit_rng* rng, uint32_t* first, uint32_t* second) {
  VSPLIT_REQUIRE(g && rng);
  return guarded([&] {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const vsplit::SplitOutcome s = g->g.split(v, lambda, rng->r);
    if (first) *first = s.first;
    if (second) *second = s.second;
  });
}

vsplit_status vsplit_graph_root_component(const vsplit_graph* g, vsplit_graph** out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = new vsplit_graph{vsplit::root_component(g->g)}; });
}

vsplit_status vsplit_graph_is_connected(const vsplit_graph* g, int* out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = vsplit::is_connected(g->g) ? 1 : 0; });
}

vsplit_status vsplit_graph_has_isolated_vertex(const vsplit_graph* g, int* out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] { *out = vsplit::has_isolated_vertex(g->g) ? 1 : 0; });
}

vsplit_status vsplit_graph_canonical_code(const vsplit_graph* g, size_t cap, char** out) {
  VSPLIT_REQUIRE(g && out);
  return guarded([&] {
    *out = dup_string(
        vsplit::canonical_form(g->g, cap ? cap : vsplit::kDefaultCanonicalCap).hex());
  });
}

vsplit_status vsplit_run_full_process(const vsplit_graph* init, double lambda, double t_end,
                                      vsplit_rng* rng, size_t max_vertices, vsplit_graph** out) {
  VSPLIT_REQUIRE(init && rng && out);
  return guarded([&] {
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
    auto state =
        vsplit::run_full_process(init->g, lambda, t_end, rng->r, process_options(max_vertices));
    *out = new vsplit_graph{state.graph()};
  });
}

vsplit_status vsplit_run_cluster_process(const vsplit_graph* init, double lambda, double t_end,
                                         vsplit_rng* rng, size_t max_vertices,
                                         vsplit_graph** out) {
  VSPLIT_REQUIRE(init && rng && out);
  return guarded([&] {
    *out = new vsplit_graph{vsplit::run_cluster_process(init->g, lambda, t_end, rng->r,
                                                        process_options(max_vertices))};
  });
}

vsplit_status vsplit_sample_m_lambda(double lambda, vsplit_rng* rng, size_t max_spine,
                                     vsplit_graph** out, char** diagnostics) {
  VSPLIT_REQUIRE(rng && out);
  return guarded([&] {
    vsplit::LimitSample s = vsplit::sample_m_lambda(lambda, rng->r, sampler_caps(max_spine));
    if (diagnostics) *diagnostics = dup_string(diagnostics_json(s.diagnostics));
    *out = new vsplit_graph{std::move(s.graph)};
  });
}

vsplit_status vsplit_sample_m_lambda_with_prefix(double lambda, double t, vsplit_rng* rng,
                                                 size_t max_spine, vsplit_graph** out) {
  VSPLIT_REQUIRE(rng && out);
  return guarded([&] {
    *out = new vsplit_graph{
        vsplit::sample_m_lambda_with_prefix(lambda, t, rng->r, sampler_caps(max_spine)).graph};
  });
}

vsplit_status vsplit_sample_g_lambda(double lambda, vsplit_rng* rng, size_t max_spine,
                                     vsplit_graph** out, char** diagnostics) {
  VSPLIT_REQUIRE(rng && out);
  return guarded([&] {
    vsplit::LimitSample s = vsplit::sample_g_lambda(lambda, rng->r, sampler_caps(max_spine));
    if (diagnostics) *diagnostics = dup_string(diagnostics_json(s.diagnostics));
    *out = new vsplit_graph{std::move(s.graph)};
  });
}

vsplit_status vsplit_list_commands(char** commands) {
  VSPLIT_REQUIRE(commands);
  return guarded(
      [&] { *commands = dup_string(nlohmann::json(vsplit::experiment_commands()).dump()); });
}

vsplit_status vsplit_run_command(const char* config_json, char** result_json) {
  VSPLIT_REQUIRE(config_json && result_json);
  return guarded([&] {
    const vsplit::ExperimentOutput r = vsplit::run_experiment(vsplit::config_from_json(config_json));
    nlohmann::json criteria = nlohmann::json::array();
    for (const auto& c : r.criteria) {
      criteria.push_back(
          {{"name", c.name}, {"passed", c.passed}, {"asserted", c.asserted}, {"detail", c.detail}});
    }
    *result_json = dup_string(nlohmann::json{{"table", r.table},
                                             {"manifest", r.manifest},
                                             {"diagnostics", r.diagnostics},
                                             {"svg", r.svg},
                                             {"criteria", criteria},
                                             {"passed", r.passed()}}
                                  .dump());
  });
}

}  // extern "C"

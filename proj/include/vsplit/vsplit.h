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

#ifndef VSPLIT_VSPLIT_H_
#define VSPLIT_VSPLIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(VSPLIT_BUILDING_LIBRARY)
#define VSPLIT_API __attribute__((visibility("default")))
#else
#define VSPLIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct vsplit_graph vsplit_graph;
typedef struct vsplit_rng vsplit_rng;

typedef enum vsplit_status {
  VSPLIT_OK = 0,
  VSPLIT_INVALID_ARGUMENT = 1,
  VSPLIT_NO_SUCH_VERTEX = 2,
  VSPLIT_PARSE_ERROR = 3,
  VSPLIT_CAP_EXCEEDED = 4,
  VSPLIT_OUT_OF_MEMORY = 5,
  VSPLIT_INTERNAL_ERROR = 6
} vsplit_status;

VSPLIT_API const char* vsplit_version(void);
VSPLIT_API const char* vsplit_status_name(vsplit_status status);

/* Message of the last failed call on the calling thread. */
VSPLIT_API const char* vsplit_last_error(void);

/* Strings returned through char** parameters are owned by the caller. */
VSPLIT_API void vsplit_string_free(char* s);

/* Random streams. derive() gives stream `index` of a master seed. */
VSPLIT_API vsplit_status vsplit_rng_create(uint64_t seed, vsplit_rng** out);
VSPLIT_API vsplit_status vsplit_rng_derive(uint64_t master_seed, uint64_t index, vsplit_rng** out);
VSPLIT_API void vsplit_rng_destroy(vsplit_rng* rng);
VSPLIT_API vsplit_status vsplit_rng_uniform(vsplit_rng* rng, double* out);

/* Graphs. */
VSPLIT_API vsplit_status vsplit_graph_create_single(vsplit_graph** out);
VSPLIT_API vsplit_status vsplit_graph_clone(const vsplit_graph* g, vsplit_graph** out);
VSPLIT_API void vsplit_graph_destroy(vsplit_graph* g);
VSPLIT_API vsplit_status vsplit_graph_from_json(const char* text, vsplit_graph** out);
VSPLIT_API vsplit_status vsplit_graph_to_json(const vsplit_graph* g, char** out);
VSPLIT_API vsplit_status vsplit_graph_vertex_count(const vsplit_graph* g, size_t* out);
VSPLIT_API vsplit_status vsplit_graph_edge_count(const vsplit_graph* g, uint64_t* out);
VSPLIT_API vsplit_status vsplit_graph_root(const vsplit_graph* g, uint32_t* out);
/* Writes up to `capacity` ids in ascending order; *count receives the total. */
VSPLIT_API vsplit_status vsplit_graph_vertices(const vsplit_graph* g, uint32_t* ids,
                                               size_t capacity, size_t* count);
VSPLIT_API vsplit_status vsplit_graph_degree(const vsplit_graph* g, uint32_t v, uint64_t* out);
VSPLIT_API vsplit_status vsplit_graph_multiplicity(const vsplit_graph* g, uint32_t u, uint32_t v,
                                                   uint32_t* out);
/* Splits v in place; the offspring ids are written to first and second. */
VSPLIT_API vsplit_status vsplit_graph_split_vertex(vsplit_graph* g, uint32_t v, double lambda,
                                                   vsplit_rng* rng, uint32_t* first,
                                                   uint32_t* second);
VSPLIT_API vsplit_status vsplit_graph_root_component(const vsplit_graph* g, vsplit_graph** out);
VSPLIT_API vsplit_status vsplit_graph_is_connected(const vsplit_graph* g, int* out);
VSPLIT_API vsplit_status vsplit_graph_has_isolated_vertex(const vsplit_graph* g, int* out);
/* Hex canonical code; exact for at most `cap` vertices (0 selects 8). */
VSPLIT_API vsplit_status vsplit_graph_canonical_code(const vsplit_graph* g, size_t cap,
                                                     char** out);

/* Processes. max_vertices = 0 selects the default cap. */
VSPLIT_API vsplit_status vsplit_run_full_process(const vsplit_graph* init, double lambda,
                                                 double t_end, vsplit_rng* rng,
                                                 size_t max_vertices, vsplit_graph** out);
VSPLIT_API vsplit_status vsplit_run_cluster_process(const vsplit_graph* init, double lambda,
                                                    double t_end, vsplit_rng* rng,
                                                    size_t max_vertices, vsplit_graph** out);

/* Invariant graphs. max_spine = 0 selects the default cap. When diagnostics
 * is non-null it receives a JSON object describing the exploration. */
VSPLIT_API vsplit_status vsplit_sample_m_lambda(double lambda, vsplit_rng* rng, size_t max_spine,
                                                vsplit_graph** out, char** diagnostics);
VSPLIT_API vsplit_status vsplit_sample_m_lambda_with_prefix(double lambda, double t,
                                                            vsplit_rng* rng, size_t max_spine,
                                                            vsplit_graph** out);
VSPLIT_API vsplit_status vsplit_sample_g_lambda(double lambda, vsplit_rng* rng, size_t max_spine,
                                                vsplit_graph** out, char** diagnostics);

/* Experiments. `commands` receives a JSON array of command names. */
VSPLIT_API vsplit_status vsplit_list_commands(char** commands);
/* Runs the experiment described by a JSON config object and writes a JSON
 * object with keys table, manifest, diagnostics, svg, criteria and passed. */
VSPLIT_API vsplit_status vsplit_run_command(const char* config_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif  // VSPLIT_VSPLIT_H_

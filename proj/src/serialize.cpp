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

#include <string>

#include "json.hpp"
#include "vsplit/multigraph.hpp"

namespace vsplit {

using nlohmann::json;

std::string to_json(const RootedMultigraph& g) {
  json doc;
  doc["root"] = g.root();
  doc["vertices"] = g.vertices();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.multiplicity});
  doc["edges"] = std::move(edges);
  return doc.dump();
}

namespace {

[[noreturn]] void structural_error(const std::string& what, const std::string& path) {
  throw ParseError("invalid graph document at " + path + ": " + what, 0, path);
}

VertexId read_id(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) structural_error("expected a non-negative integer id", path);
  const auto id = j.get<std::uint64_t>();
  if (id > kMaxParsedVertexId) structural_error("vertex id out of range", path);
  return static_cast<VertexId>(id);
}

}  // namespace

RootedMultigraph from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte, "");
  }
  if (!doc.is_object()) structural_error("expected an object", "/");
  for (const char* key : {"root", "vertices", "edges"}) {
    if (!doc.contains(key)) structural_error(std::string("missing key '") + key + "'", "/");
  }
  const VertexId root = read_id(doc["root"], "/root");
  if (!doc["vertices"].is_array()) structural_error("expected an array", "/vertices");
  if (!doc["edges"].is_array()) structural_error("expected an array", "/edges");

  std::vector<VertexId> vertices;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    vertices.push_back(read_id(doc["vertices"][i], "/vertices/" + std::to_string(i)));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    const json& e = doc["edges"][i];
    if (!e.is_array() || e.size() != 3) structural_error("expected [u, v, multiplicity]", path);
    const VertexId u = read_id(e[0], path + "/0");
    const VertexId v = read_id(e[1], path + "/1");
    if (!e[2].is_number_unsigned()) structural_error("expected a positive multiplicity", path + "/2");
    const auto m = e[2].get<std::uint64_t>();
    if (m == 0 || m > 0xffffffffULL) structural_error("multiplicity out of range", path + "/2");
    if (u == v) structural_error("loop edge", path);
    edges.push_back({std::min(u, v), std::max(u, v), static_cast<std::uint32_t>(m)});
  }
  try {
    return RootedMultigraph::from_parts(root, vertices, edges);
  } catch (const std::exception& e) {
    structural_error(e.what(), "/");
  }
}

}  // namespace vsplit

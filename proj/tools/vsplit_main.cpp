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

// Command-line driver. Everything goes through the C API in vsplit/vsplit.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vsplit/vsplit.h"

namespace {

using Json = nlohmann::json;

struct CString {
  char* p = nullptr;
  ~CString() { vsplit_string_free(p); }
};

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f);
}

std::vector<std::string> commands() {
  CString s;
  if (vsplit_list_commands(&s.p) != VSPLIT_OK) return {};
  return Json::parse(s.p).get<std::vector<std::string>>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-splitting random graph experiments"};
  app.set_version_flag("--version", std::string(vsplit_version()));

  std::string command;
  std::string kind = "m";
  std::vector<double> lambdas;
  std::vector<double> times;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::size_t max_spine = 10'000;
  std::size_t max_vertices = 10'000'000;
  std::size_t canonical_cap = 20;
  std::string out_path;
  std::string manifest_path;
  std::string svg_path;
  std::string format = "csv";
  bool diagnostics = false;

  app.add_option("command", command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--kind", kind, "Graph kind for sample: m, g or cluster")
      ->check(CLI::IsMember({"m", "g", "cluster"}));
  app.add_option("--lambda", lambdas, "Edge intensity (comma separated list)")->delimiter(',');
  app.add_option("--t", times, "Time or time grid (comma separated list)")->delimiter(',');
  app.add_option("--samples", samples, "Replicas per estimate (0: command default)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_option("--max-spine", max_spine, "Spine length cap of the limit samplers")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-vertices", max_vertices, "Vertex cap of the process simulations")
      ->check(CLI::PositiveNumber);
  app.add_option("--canonical-cap", canonical_cap, "Largest graph given an exact code");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--manifest", manifest_path, "Manifest file (default: <out>.manifest.json)");
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--diagnostics", diagnostics, "Write sampler diagnostics as a JSON sidecar");
  app.add_option("--svg", svg_path, "Write a chart to this SVG file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Json config{{"command", command},
              {"kind", kind},
              {"lambdas", lambdas},
              {"times", times},
              {"samples", samples},
              {"seed", seed},
              {"threads", threads},
              {"max_spine", max_spine},
              {"max_vertices", max_vertices},
              {"canonical_cap", canonical_cap},
              {"format", format},
              {"diagnostics", diagnostics},
              {"svg", !svg_path.empty()}};

  CString raw;
  const vsplit_status status = vsplit_run_command(config.dump().c_str(), &raw.p);
  if (status != VSPLIT_OK) {
    std::cerr << "vsplit: " << vsplit_status_name(status) << ": " << vsplit_last_error() << '\n';
    return 2;
  }
  const Json result = Json::parse(raw.p);
  const std::string table = result.at("table").get<std::string>();

  bool io_ok = true;
  auto save = [&](const std::string& path, const std::string& content) {
    if (!write_file(path, content)) {
      std::cerr << "vsplit: cannot write " << path << '\n';
      io_ok = false;
    }
  };
  if (out_path.empty()) {
    std::cout << table;
  } else {
    save(out_path, table);
  }
  if (manifest_path.empty() && !out_path.empty()) manifest_path = out_path + ".manifest.json";
  if (!manifest_path.empty()) save(manifest_path, result.at("manifest").get<std::string>());
  if (diagnostics) {
    const std::string diag = result.at("diagnostics").get<std::string>();
    if (out_path.empty()) {
      std::cerr << diag;
    } else {
      save(out_path + ".diagnostics.json", diag);
    }
  }
  if (!svg_path.empty()) {
    const std::string svg = result.at("svg").get<std::string>();
    if (svg.empty()) {
      std::cerr << "vsplit: " << command << " has no chart\n";
    } else {
      save(svg_path, svg);
    }
  }

  for (const Json& c : result.at("criteria")) {
    const bool asserted = c.at("asserted").get<bool>();
    const bool passed = c.at("passed").get<bool>();
    const char* label = !asserted ? (passed ? "INFO" : "NOTE") : (passed ? "PASS" : "FAIL");
    std::cerr << label << ' ' << c.at("name").get<std::string>() << ": "
              << c.at("detail").get<std::string>() << '\n';
  }
  if (!io_ok) return 2;
  return result.at("passed").get<bool>() ? 0 : 1;
}

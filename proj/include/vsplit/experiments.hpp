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

#ifndef VSPLIT_EXPERIMENTS_HPP_
#define VSPLIT_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vsplit/processes.hpp"

namespace vsplit {

struct ExperimentConfig {
  std::string command;
  std::string kind = "m";  // sample: m, g or cluster
  // Empty lists and zero samples select the command's defaults.
  std::vector<double> lambdas;
  std::vector<double> times;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::size_t max_spine = 10'000;
  std::size_t max_vertices = kDefaultMaxVertices;
  std::size_t canonical_cap = 20;
  std::string format = "csv";  // csv or json
  bool diagnostics = false;
  bool svg = false;
};

// One checked property. Reported-only properties have asserted = false and
// never affect the exit status.
struct Criterion {
  std::string name;
  bool passed = false;
  bool asserted = true;
  std::string detail;
};

struct ExperimentOutput {
  std::string table;        // CSV or JSON, per config.format
  std::string manifest;     // JSON
  std::string diagnostics;  // JSON, only when requested
  std::string svg;          // only when requested and the command plots
  std::vector<Criterion> criteria;

  bool passed() const;
};

std::vector<std::string> experiment_commands();

// Throws std::invalid_argument for unknown commands or invalid settings.
ExperimentOutput run_experiment(const ExperimentConfig& config);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

// P(X_0, ..., X_L > 0) for the chain X_{k+1} = Bin(X_k, 1/2) + Po(lambda/2)
// with X_0 ~ Po(lambda), by dynamic programming on states below `states`.
double stub_chain_survival(double lambda, std::size_t L, std::size_t states = 200);

}  // namespace vsplit

#endif  // VSPLIT_EXPERIMENTS_HPP_

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
#include <cmath>

#include <gtest/gtest.h>

#include "json.hpp"

namespace vsplit {
namespace {

ExperimentConfig small(const std::string& command, std::uint64_t samples) {
  ExperimentConfig c;
  c.command = command;
  c.samples = samples;
  c.seed = 42;
  return c;
}

TEST(Experiments, CommandListIsSorted) {
  const auto cmds = experiment_commands();
  EXPECT_TRUE(std::is_sorted(cmds.begin(), cmds.end()));
  for (const char* name : {"sample", "stationarity", "convergence", "cross-validate",
                           "double-edge", "threshold", "mean-size", "spine-tail",
                           "singleton-free", "kill-time", "chain"}) {
    EXPECT_NE(std::find(cmds.begin(), cmds.end(), name), cmds.end()) << name;
  }
}

TEST(Experiments, UnknownCommandRejected) {
  EXPECT_THROW(run_experiment(small("no-such-command", 10)), std::invalid_argument);
}

TEST(Experiments, InvalidSettingsRejected) {
  ExperimentConfig c = small("sample", 10);
  c.lambdas = {-1.0};
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("sample", 10);
  c.format = "xml";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Experiments, ResultsIndependentOfThreadCount) {
  for (const char* cmd : {"sample", "mean-size", "spine-tail"}) {
    ExperimentConfig one = small(cmd, 3000);
    one.lambdas = {1.0};
    one.threads = 1;
    ExperimentConfig many = one;
    many.threads = 3;
    EXPECT_EQ(run_experiment(one).table, run_experiment(many).table) << cmd;
  }
}

TEST(Experiments, SeedChangesOutput) {
  ExperimentConfig a = small("sample", 50);
  ExperimentConfig b = a;
  b.seed = 43;
  EXPECT_NE(run_experiment(a).table, run_experiment(b).table);
}

TEST(Experiments, SampleWritesOneDocumentPerLine) {
  ExperimentConfig c = small("sample", 20);
  c.lambdas = {1.0};
  const ExperimentOutput out = run_experiment(c);
  std::size_t lines = std::count(out.table.begin(), out.table.end(), '\n');
  EXPECT_EQ(lines, 20u);
  const auto first = nlohmann::json::parse(out.table.substr(0, out.table.find('\n')));
  EXPECT_EQ(first.at("root"), 0);
}

TEST(Experiments, ManifestRecordsRun) {
  const ExperimentOutput out = run_experiment(small("chain", 2000));
  const auto m = nlohmann::json::parse(out.manifest);
  EXPECT_EQ(m.at("config").at("command"), "chain");
  EXPECT_EQ(m.at("config").at("seed"), 42);
  EXPECT_TRUE(m.contains("wall_clock_seconds"));
  EXPECT_TRUE(m.contains("threads_used"));
  EXPECT_EQ(m.at("passed").get<bool>(), out.passed());
  EXPECT_FALSE(out.criteria.empty());
}

TEST(Experiments, SvgOnRequest) {
  ExperimentConfig c = small("mean-size", 500);
  c.svg = true;
  const ExperimentOutput out = run_experiment(c);
  EXPECT_NE(out.svg.find("<svg"), std::string::npos);
  EXPECT_NE(out.svg.find("</svg>"), std::string::npos);
}

TEST(Experiments, PassedIgnoresReportedCriteria) {
  ExperimentOutput out;
  out.criteria.push_back({"a", true, true, ""});
  out.criteria.push_back({"b", false, false, ""});
  EXPECT_TRUE(out.passed());
  out.criteria.push_back({"c", false, true, ""});
  EXPECT_FALSE(out.passed());
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = small("threshold", 123);
  c.lambdas = {8.0};
  c.times = {0.0, 2.4};
  c.threads = 2;
  c.diagnostics = true;
  const ExperimentConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.command, c.command);
  EXPECT_EQ(back.lambdas, c.lambdas);
  EXPECT_EQ(back.times, c.times);
  EXPECT_EQ(back.samples, 123u);
  EXPECT_EQ(back.threads, 2u);
  EXPECT_TRUE(back.diagnostics);
}

TEST(Config, ScalarAliases) {
  const ExperimentConfig c = config_from_json(R"({"command":"sample","lambda":2,"t":[1,2]})");
  EXPECT_EQ(c.lambdas, std::vector<double>{2.0});
  EXPECT_EQ(c.times, (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(config_from_json("not json"), std::invalid_argument);
}

TEST(StubChainSurvival, Values) {
  EXPECT_NEAR(stub_chain_survival(1.0, 0), 1 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(stub_chain_survival(1.0, 5), 0.1856, 5e-4);
  EXPECT_NEAR(stub_chain_survival(1.0, 10), 0.0564, 5e-4);
  EXPECT_NEAR(stub_chain_survival(1.0, 20), 0.0052, 5e-4);
  EXPECT_GE(stub_chain_survival(1.0, 5), stub_chain_survival(1.0, 6));
}

}  // namespace
}  // namespace vsplit

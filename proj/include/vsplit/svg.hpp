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

#ifndef VSPLIT_SVG_HPP_
#define VSPLIT_SVG_HPP_

#include <string>
#include <utility>
#include <vector>

namespace vsplit {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

// Self-contained SVG line chart with markers and a legend.
std::string line_chart(const ChartSpec& spec);

}  // namespace vsplit

#endif  // VSPLIT_SVG_HPP_

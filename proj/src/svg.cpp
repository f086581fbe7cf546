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

#include "vsplit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace vsplit {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Axis {
  double lo;
  double hi;
  bool log;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return b == a ? 0.5 : (x - a) / (b - a);
  }
};

Axis fit_axis(const ChartSpec& spec, bool x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const bool log = x ? spec.log_x : spec.log_y;
  for (const Series& s : spec.series) {
    for (auto [px, py] : s.points) {
      const double v = x ? px : py;
      if (!std::isfinite(v) || (log && v <= 0)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {log ? 1.0 : 0.0, log ? 10.0 : 1.0, log};
  if (lo == hi) {
    if (log) return {lo / 2, hi * 2, log};
    return {lo - 1, hi + 1, log};
  }
  return {lo, hi, log};
}

}  // namespace

std::string line_chart(const ChartSpec& spec) {
  const Axis ax = fit_axis(spec, true);
  const Axis ay = fit_axis(spec, false);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.map(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.map(v)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    auto tick = [&](const Axis& a) {
      if (a.log) return std::pow(10.0, std::log10(a.lo) + f * (std::log10(a.hi) - std::log10(a.lo)));
      return a.lo + f * (a.hi - a.lo);
    };
    const double x = kLeft + f * pw;
    const double y = kTop + (1.0 - f) * ph;
    out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << fmt(tick(ax)) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << fmt(tick(ay)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const Series& s = spec.series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::ostringstream path;
    bool first = true;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (ax.log && x <= 0) || (ay.log && y <= 0)) {
        continue;
      }
      path << (first ? "M" : " L") << px(x) << ' ' << py(y);
      first = false;
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    if (!first) {
      out << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + pw + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 36 << "\" y=\"" << ly << "\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace vsplit

// Copyright 2026 The LIMMS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static SVG rendering of trace columns: one panel per joint, one line per
// module, time on the horizontal axis.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "limms/sim/trace.hpp"

namespace limms {

enum class PlotQuantity { kTorque, kVelocity };

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

inline void write_joint_plot(const sim::SimResult& r, PlotQuantity what,
                             const std::string& path) {
  constexpr double kPanelW = 420.0, kPanelH = 200.0, kMargin = 48.0;
  constexpr int kCols = 2, kRows = 3;
  constexpr std::size_t kMaxPoints = 1500;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const char* unit = what == PlotQuantity::kTorque ? "N m" : "rad/s";
  const char* label = what == PlotQuantity::kTorque ? "torque" : "velocity";

  const double width = kCols * (kPanelW + kMargin) + kMargin;
  const double height = kRows * (kPanelH + kMargin) + kMargin;
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double t_max = 0.0;
  for (const auto& row : r.rows) t_max = std::max(t_max, row.t);
  if (t_max <= 0.0) t_max = 1.0;

  for (int j = 0; j < kNumJoints; ++j) {
    const double x0 = kMargin + (j % kCols) * (kPanelW + kMargin);
    const double y0 = kMargin + (j / kCols) * (kPanelH + kMargin);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : r.rows) {
      const double v = what == PlotQuantity::kTorque ? row.tau[j] : row.qd[j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    auto px = [&](double t) { return x0 + kPanelW * t / t_max; };
    auto py = [&](double v) { return y0 + kPanelH * (hi - v) / (hi - lo); };

    out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanelW
        << "\" height=\"" << kPanelH << "\" fill=\"none\" stroke=\"#888\"/>\n";
    out << "<text x=\"" << x0 << "\" y=\"" << y0 - 6 << "\">joint " << j + 1
        << " " << label << " [" << unit << "]  range " << detail::svg_num(lo)
        << " .. " << detail::svg_num(hi) << "</text>\n";
    if (lo < 0.0 && hi > 0.0) {
      out << "<line x1=\"" << x0 << "\" x2=\"" << x0 + kPanelW << "\" y1=\""
          << detail::svg_num(py(0.0)) << "\" y2=\"" << detail::svg_num(py(0.0))
          << "\" stroke=\"#ccc\"/>\n";
    }
    for (int m = 0; m < r.num_modules; ++m) {
      const auto rows = sim::module_rows(r, m);
      const std::size_t stride = std::max<std::size_t>(1, rows.size() / kMaxPoints);
      out << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\""
          << kColors[m % 4] << "\" points=\"";
      for (std::size_t i = 0; i < rows.size(); i += stride) {
        const double v = what == PlotQuantity::kTorque ? rows[i].tau[j] : rows[i].qd[j];
        out << detail::svg_num(px(rows[i].t)) << "," << detail::svg_num(py(v)) << " ";
      }
      out << "\"/>\n";
    }
    out << "<text x=\"" << x0 + kPanelW - 40 << "\" y=\"" << y0 + kPanelH + 14
        << "\">t [s]</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace limms

// Copyright (c) 2026 ttsaug authors
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

#include "ttsaug/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ttsaug/common.h"

namespace ttsaug {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMarginL = 64;
constexpr int kMarginR = 24;
constexpr int kMarginT = 36;
constexpr int kMarginB = 48;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string Fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void WriteSvgLineChart(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series, bool log_y) {
  TTSAUG_CHECK(!series.empty(), DataError, "line chart needs at least one series");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    TTSAUG_CHECK(s.x.size() == s.y.size() && !s.x.empty(), DataError,
                 "series sizes mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (log_y) yv = std::log10(std::max(yv, 1e-12));
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto map_x = [&](double v) { return kMarginL + (v - xmin) / (xmax - xmin) * plot_w; };
  auto map_y = [&](double v) {
    if (log_y) v = std::log10(std::max(v, 1e-12));
    return kMarginT + plot_h - (v - ymin) / (ymax - ymin) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << EscapeXml(title)
      << "</text>\n";
  // Axes.
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
      << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
      << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << EscapeXml(x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << EscapeXml(y_label)
      << "</text>\n";
  // Tick labels at the extremes.
  svg << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - kMarginB + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << Fmt(xmin) << "</text>\n";
  svg << "<text x=\"" << kWidth - kMarginR - 40 << "\" y=\"" << kHeight - kMarginB + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << Fmt(xmax) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << kMarginT + 10
      << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << Fmt(log_y ? std::pow(10.0, ymax) : ymax) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << kHeight - kMarginB
      << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << Fmt(log_y ? std::pow(10.0, ymin) : ymin) << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 8];
    const bool dashed = s.label.find("val") != std::string::npos;
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) svg << " stroke-dasharray=\"6,4\"";
    svg << " points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << " ";
      svg << Fmt(map_x(s.x[i])) << "," << Fmt(map_y(s.y[i]));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kMarginL + 8 << "\" y=\"" << kMarginT + 14 + 14 * si
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
        << EscapeXml(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  AtomicWriteFile(path, svg.str());
}

void WriteSvgBarChart(const std::string& path, const std::string& title,
                      const std::vector<std::string>& categories,
                      const std::vector<std::string>& series_labels,
                      const std::vector<std::vector<double>>& values) {
  TTSAUG_CHECK(!values.empty() && !categories.empty(), DataError, "empty bar chart");
  for (const auto& v : values)
    TTSAUG_CHECK(v.size() == categories.size(), DataError, "bar chart sizes");
  double ymax = 0.0;
  for (const auto& v : values)
    for (double y : v) ymax = std::max(ymax, y);
  if (ymax <= 0.0) ymax = 1.0;
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const size_t ncat = categories.size();
  const size_t nser = values.size();
  const double slot = plot_w / static_cast<double>(ncat);
  const double bar = slot * 0.8 / static_cast<double>(nser);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << EscapeXml(title)
      << "</text>\n";
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
      << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
      << "\" stroke=\"black\"/>\n";
  for (size_t c = 0; c < ncat; ++c) {
    for (size_t s = 0; s < nser; ++s) {
      const double h = values[s][c] / ymax * plot_h;
      const double x = kMarginL + slot * (static_cast<double>(c) + 0.1) +
                       bar * static_cast<double>(s);
      svg << "<rect x=\"" << Fmt(x) << "\" y=\"" << Fmt(kMarginT + plot_h - h)
          << "\" width=\"" << Fmt(bar) << "\" height=\"" << Fmt(h) << "\" fill=\""
          << kColors[s % 8] << "\"/>\n";
    }
    svg << "<text x=\"" << Fmt(kMarginL + slot * (static_cast<double>(c) + 0.5))
        << "\" y=\"" << kHeight - kMarginB + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << EscapeXml(categories[c]) << "</text>\n";
  }
  for (size_t s = 0; s < nser; ++s) {
    svg << "<text x=\"" << kMarginL + 8 << "\" y=\"" << kMarginT + 14 + 14 * s
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kColors[s % 8]
        << "\">" << EscapeXml(series_labels[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  AtomicWriteFile(path, svg.str());
}

}  // namespace ttsaug

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

#ifndef TTSAUG_SVG_PLOT_H_
#define TTSAUG_SVG_PLOT_H_

#include <string>
#include <vector>

namespace ttsaug {

// Minimal deterministic SVG charts; fixed formatting so identical inputs
// yield byte-identical files.

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void WriteSvgLineChart(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series,
                       bool log_y = false);

// Grouped bar chart: values[s][i] is series s at category i.
void WriteSvgBarChart(const std::string& path, const std::string& title,
                      const std::vector<std::string>& categories,
                      const std::vector<std::string>& series_labels,
                      const std::vector<std::vector<double>>& values);

}  // namespace ttsaug

#endif  // TTSAUG_SVG_PLOT_H_

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

#include "ttsaug/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ttsaug/common.h"
#include "ttsaug/svg_plot.h"

namespace ttsaug {

void LossCurve::Validate() const {
  TTSAUG_CHECK(!steps.empty(), DataError, "empty loss curve");
  TTSAUG_CHECK(steps.size() == train_loss.size() && steps.size() == val_loss.size(),
               AlignmentError, "loss curve column lengths differ");
  for (size_t i = 1; i < steps.size(); ++i)
    TTSAUG_CHECK(steps[i] > steps[i - 1], DataError,
                 "loss curve steps must be strictly increasing");
}

LossCurve LossCurve::FromCsv(const std::string& path, const std::string& train_col,
                             const std::string& val_col) {
  std::istringstream in(ReadTextFile(path));
  std::string header;
  TTSAUG_CHECK(static_cast<bool>(std::getline(in, header)), DataError,
               "empty csv: " + path);
  const std::vector<std::string> cols = SplitString(header, ',');
  int step_i = -1, train_i = -1, val_i = -1;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "step") step_i = static_cast<int>(i);
    if (cols[i] == train_col) train_i = static_cast<int>(i);
    if (cols[i] == val_col) val_i = static_cast<int>(i);
  }
  TTSAUG_CHECK(step_i >= 0 && train_i >= 0 && val_i >= 0, DataError,
               "csv missing requested columns: " + path);
  LossCurve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> vals = SplitString(line, ',');
    c.steps.push_back(std::stoll(vals[static_cast<size_t>(step_i)]));
    c.train_loss.push_back(std::stod(vals[static_cast<size_t>(train_i)]));
    c.val_loss.push_back(std::stod(vals[static_cast<size_t>(val_i)]));
  }
  c.Validate();
  return c;
}

double GeneralizationGap(const LossCurve& curve, double tail_fraction) {
  curve.Validate();
  TTSAUG_CHECK(tail_fraction > 0.0 && tail_fraction <= 1.0, ConfigError,
               "tail fraction in (0,1]");
  const size_t n = curve.steps.size();
  const size_t tail = std::max<size_t>(
      1, static_cast<size_t>(std::llround(tail_fraction * static_cast<double>(n))));
  double sum = 0.0;
  for (size_t i = n - tail; i < n; ++i)
    sum += curve.val_loss[i] - curve.train_loss[i];
  return sum / static_cast<double>(tail);
}

double MelL1(const Tensor& reference, const Tensor& generated) {
  TTSAUG_CHECK(reference.ndim() == 2 && generated.ndim() == 2, ShapeError,
               "mel matrices must be 2-D");
  TTSAUG_CHECK(reference.SameShape(generated), AlignmentError,
               "mel lengths must match (durations are shared)");
  double sum = 0.0;
  for (int64_t i = 0; i < reference.size(); ++i)
    sum += std::abs(reference[i] - generated[i]);
  return sum / static_cast<double>(reference.size());
}

DurationAccuracy ComputeDurationAccuracy(
    const std::vector<std::vector<int>>& predicted,
    const std::vector<std::vector<int>>& reference) {
  TTSAUG_CHECK(predicted.size() == reference.size() && !predicted.empty(),
               AlignmentError, "duration accuracy needs matching utterances");
  int64_t exact = 0, total = 0;
  double abs_err = 0.0;
  for (size_t u = 0; u < predicted.size(); ++u) {
    TTSAUG_CHECK(predicted[u].size() == reference[u].size(), AlignmentError,
                 "duration sequence lengths differ");
    for (size_t k = 0; k < predicted[u].size(); ++k) {
      ++total;
      if (predicted[u][k] == reference[u][k]) ++exact;
      abs_err += std::abs(predicted[u][k] - reference[u][k]);
    }
  }
  DurationAccuracy acc;
  acc.exact_match_rate = static_cast<double>(exact) / static_cast<double>(total);
  acc.mean_abs_error = abs_err / static_cast<double>(total);
  return acc;
}

void EmitReport(const std::vector<RunSummary>& runs, const std::string& out_dir,
                double tail_fraction) {
  TTSAUG_CHECK(!runs.empty(), DataError, "report needs at least one run");
  MakeDirs(out_dir);
  std::vector<RunSummary> sorted = runs;
  std::sort(sorted.begin(), sorted.end(),
            [](const RunSummary& a, const RunSummary& b) { return a.label < b.label; });

  const char* disclaimer =
      "# Objective proxy metrics (mel L1, generalization gap, duration "
      "accuracy); no perceptual listening scores.\n";
  char buf[64];

  std::ostringstream gap;
  gap << disclaimer << "label,generalization_gap,final_train_loss,final_val_loss\n";
  for (const auto& r : sorted) {
    r.curve.Validate();
    std::snprintf(buf, sizeof(buf), "%.8f", GeneralizationGap(r.curve, tail_fraction));
    gap << r.label << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.8f", r.curve.train_loss.back());
    gap << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.8f", r.curve.val_loss.back());
    gap << ',' << buf << '\n';
  }
  AtomicWriteFile(out_dir + "/gap_table.csv", gap.str());

  std::ostringstream metrics;
  metrics << disclaimer
          << "label,test_mel_l1,duration_exact_match,duration_mean_abs_error\n";
  for (const auto& r : sorted) {
    std::snprintf(buf, sizeof(buf), "%.8f", r.test_mel_l1);
    metrics << r.label << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.6f", r.duration.exact_match_rate);
    metrics << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.6f", r.duration.mean_abs_error);
    metrics << ',' << buf << '\n';
  }
  AtomicWriteFile(out_dir + "/metrics_table.csv", metrics.str());

  std::vector<PlotSeries> series;
  for (const auto& r : sorted) {
    PlotSeries train, val;
    train.label = r.label + " train";
    val.label = r.label + " val";
    for (size_t i = 0; i < r.curve.steps.size(); ++i) {
      train.x.push_back(static_cast<double>(r.curve.steps[i]));
      train.y.push_back(r.curve.train_loss[i]);
      val.x.push_back(static_cast<double>(r.curve.steps[i]));
      val.y.push_back(r.curve.val_loss[i]);
    }
    series.push_back(std::move(train));
    series.push_back(std::move(val));
  }
  WriteSvgLineChart(out_dir + "/loss_curves.svg",
                    "Training and validation mel L1 (objective proxy)", "step",
                    "mel L1", series);
}

}  // namespace ttsaug

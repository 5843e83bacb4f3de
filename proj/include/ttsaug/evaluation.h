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

#ifndef TTSAUG_EVALUATION_H_
#define TTSAUG_EVALUATION_H_

#include <string>
#include <vector>

#include "ttsaug/tensor.h"

namespace ttsaug {

struct LossCurve {
  std::vector<int64_t> steps;
  std::vector<double> train_loss;
  std::vector<double> val_loss;

  void Validate() const;  // strictly increasing steps, equal lengths
  // Reads two named columns out of a training CSV.
  static LossCurve FromCsv(const std::string& path, const std::string& train_col,
                           const std::string& val_col);
};

// Mean (val - train) over the final tail_fraction of logged steps.
double GeneralizationGap(const LossCurve& curve, double tail_fraction = 0.2);

// Mean absolute difference over aligned frames; lengths must match.
double MelL1(const Tensor& reference, const Tensor& generated);

struct DurationAccuracy {
  double exact_match_rate = 0.0;
  double mean_abs_error = 0.0;
};
DurationAccuracy ComputeDurationAccuracy(
    const std::vector<std::vector<int>>& predicted,
    const std::vector<std::vector<int>>& reference);

struct RunSummary {
  std::string label;
  LossCurve curve;
  double test_mel_l1 = 0.0;
  DurationAccuracy duration;
};

// Loss-curve plot, gap table and metric table under out_dir. Content is
// deterministic for identical inputs.
void EmitReport(const std::vector<RunSummary>& runs, const std::string& out_dir,
                double tail_fraction = 0.2);

}  // namespace ttsaug

#endif  // TTSAUG_EVALUATION_H_

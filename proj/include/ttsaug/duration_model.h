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

#ifndef TTSAUG_DURATION_MODEL_H_
#define TTSAUG_DURATION_MODEL_H_

#include <string>
#include <vector>

#include "ttsaug/nn.h"
#include "ttsaug/optim.h"

namespace ttsaug {

struct DurationPredictorConfig {
  int64_t embed_dim = 256;
  std::vector<int64_t> fc_units = {1024, 512, 256};
  int64_t recurrent_units = 128;

  void Validate() const;
};

// External phoneme-duration predictor: embedding + positional index through
// an FC stack into a unidirectional LSTM, regressing log durations.
class DurationModel {
 public:
  DurationModel(int vocab, const DurationPredictorConfig& cfg, uint64_t seed);

  const DurationPredictorConfig& config() const { return cfg_; }
  int vocab() const { return vocab_; }

  // Input feature rows for a phoneme sequence: embedding plus a relative
  // position column. Rows carry gradient into the embedding table.
  Var InputFeatures(const std::vector<int>& phonemes) const;
  // [P, dim] feature matrix -> [P, 1] log durations.
  Var ForwardFeatures(const Var& features) const;
  // Positive real durations in frames (exp of the regressed log durations).
  std::vector<double> Predict(const std::vector<int>& phonemes) const;
  // MSE on log durations.
  Var Loss(const std::vector<int>& phonemes,
           const std::vector<int>& target_durations) const;

  void CollectParams(std::vector<NamedParam>* out);

 private:
  DurationPredictorConfig cfg_;
  int vocab_ = 0;
  Embedding embed_;
  std::vector<Linear> fc_;
  LstmCell lstm_;
  Linear out_;
};

// Round-half-up with a 1-frame minimum. When target_total is >= 0 the
// residual is distributed by largest fractional part (ties broken by index:
// earlier phonemes gain first, later phonemes shrink first).
std::vector<int> QuantizeDurations(const std::vector<double>& real_durations,
                                   int64_t target_total = -1);

// Repeats row k of phone_features durations[k] times.
Tensor UpsampleByDuration(const Tensor& phone_features,
                          const std::vector<int>& durations);

}  // namespace ttsaug

#endif  // TTSAUG_DURATION_MODEL_H_

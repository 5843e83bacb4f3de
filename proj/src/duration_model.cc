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

#include "ttsaug/duration_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttsaug {

void DurationPredictorConfig::Validate() const {
  TTSAUG_CHECK(embed_dim >= 1 && recurrent_units >= 1, ConfigError,
               "duration model sizes must be >= 1");
  TTSAUG_CHECK(!fc_units.empty(), ConfigError, "duration model needs FC layers");
  for (int64_t u : fc_units)
    TTSAUG_CHECK(u >= 1, ConfigError, "duration model FC width must be >= 1");
}

DurationModel::DurationModel(int vocab, const DurationPredictorConfig& cfg,
                             uint64_t seed)
    : cfg_(cfg), vocab_(vocab) {
  cfg.Validate();
  RngStream rng = MakeStream(seed, "duration_model_init");
  embed_ = Embedding(vocab, cfg.embed_dim, &rng);
  int64_t in = cfg.embed_dim + 1;  // +1 for the position column
  for (int64_t u : cfg.fc_units) {
    fc_.emplace_back(in, u, &rng);
    in = u;
  }
  lstm_ = LstmCell(in, cfg.recurrent_units, &rng);
  out_ = Linear(cfg.recurrent_units, 1, &rng);
}

Var DurationModel::InputFeatures(const std::vector<int>& phonemes) const {
  TTSAUG_CHECK(!phonemes.empty(), ShapeError, "empty phoneme sequence");
  Var emb = embed_.Forward(phonemes);
  const auto P = static_cast<int64_t>(phonemes.size());
  Tensor pos({P, 1});
  for (int64_t p = 0; p < P; ++p)
    pos.at(p, 0) = P > 1 ? static_cast<double>(p) / static_cast<double>(P - 1) : 0.0;
  return ConcatCols(emb, Var::Const(std::move(pos)));
}

Var DurationModel::ForwardFeatures(const Var& features) const {
  TTSAUG_CHECK(features.value().ndim() == 2, ShapeError,
               "duration features must be 2-D");
  TTSAUG_CHECK(features.value().dim(0) >= 1, ShapeError, "empty phoneme sequence");
  TTSAUG_CHECK(features.value().dim(1) == cfg_.embed_dim + 1, ShapeError,
               "duration feature dim mismatch: got " +
                   features.value().ShapeStr());
  Var h = features;
  for (const auto& fc : fc_) h = Relu(fc.Forward(h));
  h = lstm_.Sequence(h);
  return out_.Forward(h);
}

std::vector<double> DurationModel::Predict(const std::vector<int>& phonemes) const {
  Var log_dur = ForwardFeatures(InputFeatures(phonemes));
  std::vector<double> out(phonemes.size());
  for (size_t p = 0; p < phonemes.size(); ++p)
    out[p] = std::exp(log_dur.value().at(static_cast<int64_t>(p), 0));
  return out;
}

Var DurationModel::Loss(const std::vector<int>& phonemes,
                        const std::vector<int>& target_durations) const {
  TTSAUG_CHECK(phonemes.size() == target_durations.size(), AlignmentError,
               "phoneme/duration length mismatch");
  Var pred = ForwardFeatures(InputFeatures(phonemes));
  Tensor tgt({static_cast<int64_t>(target_durations.size()), 1});
  for (size_t p = 0; p < target_durations.size(); ++p) {
    TTSAUG_CHECK(target_durations[p] >= 1, AlignmentError,
                 "target duration below 1 frame");
    tgt.at(static_cast<int64_t>(p), 0) = std::log(static_cast<double>(target_durations[p]));
  }
  return MseLoss(pred, Var::Const(std::move(tgt)));
}

void DurationModel::CollectParams(std::vector<NamedParam>* out) {
  embed_.Collect("dur.embed", out);
  for (size_t i = 0; i < fc_.size(); ++i)
    fc_[i].Collect("dur.fc" + std::to_string(i), out);
  lstm_.Collect("dur.lstm", out);
  out_.Collect("dur.out", out);
}

std::vector<int> QuantizeDurations(const std::vector<double>& real_durations,
                                   int64_t target_total) {
  TTSAUG_CHECK(!real_durations.empty(), ShapeError, "empty duration sequence");
  const size_t n = real_durations.size();
  std::vector<int> out(n);
  std::vector<double> frac(n);
  int64_t total = 0;
  for (size_t i = 0; i < n; ++i) {
    const double d = real_durations[i];
    TTSAUG_CHECK(std::isfinite(d) && d > 0.0, DataError,
                 "durations must be finite and positive");
    const double rounded = std::floor(d + 0.5);
    frac[i] = d + 0.5 - rounded;
    out[i] = std::max(1, static_cast<int>(rounded));
    total += out[i];
  }
  if (target_total < 0) return out;
  TTSAUG_CHECK(target_total >= static_cast<int64_t>(n), AlignmentError,
               "target frame total below one frame per phoneme");
  std::vector<size_t> order(n);
  while (total != target_total) {
    std::iota(order.begin(), order.end(), 0);
    if (total < target_total) {
      // Grow the largest fractional parts first; earlier index wins ties.
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (frac[a] != frac[b]) return frac[a] > frac[b];
        return a < b;
      });
      for (size_t i : order) {
        if (total == target_total) break;
        ++out[i];
        ++total;
      }
    } else {
      // Shrink the smallest fractional parts first; later index loses first.
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (frac[a] != frac[b]) return frac[a] < frac[b];
        return a > b;
      });
      for (size_t i : order) {
        if (total == target_total) break;
        if (out[i] > 1) {
          --out[i];
          --total;
        }
      }
    }
  }
  return out;
}

Tensor UpsampleByDuration(const Tensor& phone_features,
                          const std::vector<int>& durations) {
  TTSAUG_CHECK(phone_features.ndim() == 2, ShapeError,
               "phone features must be 2-D");
  TTSAUG_CHECK(static_cast<int64_t>(durations.size()) == phone_features.dim(0),
               AlignmentError, "phoneme/duration length mismatch");
  int64_t total = 0;
  for (int d : durations) {
    TTSAUG_CHECK(d >= 1, AlignmentError, "duration below 1 frame");
    total += d;
  }
  Tensor out({total, phone_features.dim(1)});
  int64_t at = 0;
  for (int64_t p = 0; p < phone_features.dim(0); ++p) {
    for (int r = 0; r < durations[static_cast<size_t>(p)]; ++r, ++at)
      for (int64_t d = 0; d < phone_features.dim(1); ++d)
        out.at(at, d) = phone_features.at(p, d);
  }
  return out;
}

}  // namespace ttsaug

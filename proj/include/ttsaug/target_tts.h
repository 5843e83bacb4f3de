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

#ifndef TTSAUG_TARGET_TTS_H_
#define TTSAUG_TARGET_TTS_H_

#include <optional>
#include <vector>

#include "ttsaug/nn.h"

namespace ttsaug {

struct TargetModelConfig {
  int vocab = 55;
  int64_t embed_dim = 256;
  int encoder_blocks = 4;
  int decoder_blocks = 4;
  int64_t attn_hidden = 384;
  int attn_heads = 2;
  int conv_kernel1 = 9;
  int conv_kernel2 = 1;
  int64_t conv_filter = 1024;
  double fft_dropout = 0.1;
  int var_predictor_blocks = 5;
  int64_t var_predictor_dim = 256;
  int var_predictor_kernel = 5;
  double var_predictor_dropout = 0.5;
  int64_t mel_dim = 80;
  int postnet_layers = 5;
  int postnet_kernel = 5;
  int64_t postnet_channels = 512;
  int pitch_bins = 256;
  int energy_bins = 256;
  bool use_positional_encoding = true;

  void Validate() const;
};

// Per-phoneme supervision for the variance adaptor.
struct VarianceTargets {
  std::vector<int> durations;     // frames, >= 1 each
  std::vector<double> pitch;      // normalized, phoneme-averaged
  std::vector<double> energy;     // normalized, phoneme-averaged

  std::vector<double> LogDurations() const;
  void Validate(size_t phoneme_count) const;
};

// Quantization range for pitch/energy embedding bins, fitted on training
// targets and stored with the model.
struct VarianceRanges {
  double pitch_min = -3.0, pitch_max = 3.0;
  double energy_min = -3.0, energy_max = 3.0;
};

// Self-attention + two-layer convolution, each with residual and layer norm.
// Padded positions (mask 0) stay exactly zero and cannot influence others.
class FftBlock {
 public:
  FftBlock() = default;
  FftBlock(const TargetModelConfig& cfg, RngStream* rng);
  Var Forward(const Var& x, const std::vector<uint8_t>* mask, RngStream* rng,
              bool train) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);

 private:
  MultiHeadSelfAttention attn_;
  LayerNorm ln1_, ln2_;
  Conv1dLayer conv1_, conv2_;
  double dropout_ = 0.0;
};

class VariancePredictor {
 public:
  VariancePredictor() = default;
  VariancePredictor(int64_t in_dim, const TargetModelConfig& cfg, RngStream* rng);
  // [P, in_dim] -> [P, 1]
  Var Forward(const Var& x, RngStream* rng, bool train) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);

 private:
  std::vector<Conv1dLayer> convs_;
  std::vector<LayerNorm> norms_;
  Linear out_;
  double dropout_ = 0.0;
};

class NarAcousticModel {
 public:
  enum class Mode { kTrain, kInfer };

  NarAcousticModel(const TargetModelConfig& cfg, uint64_t seed);

  const TargetModelConfig& config() const { return cfg_; }
  void SetVarianceRanges(const VarianceRanges& r) { ranges_ = r; }
  const VarianceRanges& variance_ranges() const { return ranges_; }

  struct Output {
    Var encoded;        // [P, hidden] encoder output before variance adaptor
    Var expanded;       // [T, hidden] after pitch/energy add and expansion
    Var mel_pre;        // [T, mel]
    Var mel_post;       // [T, mel]
    Var duration_pred;  // [P, 1] log frames
    Var pitch_pred;     // [P, 1]
    Var energy_pred;    // [P, 1]
    std::vector<int> used_durations;
  };

  // In train mode, targets supply durations and pitch/energy embedding
  // inputs; in infer mode the model's own predictions are used, with
  // forced_durations optionally overriding the predicted durations (needed
  // when comparing against reference features of a known length).
  Output Forward(const std::vector<int>& phonemes, const VarianceTargets* targets,
                 Mode mode, RngStream* rng,
                 const std::vector<int>* forced_durations = nullptr) const;

  struct LossOut {
    Var total;
    double mel_l1_pre = 0.0;
    double mel_l1_post = 0.0;
    double duration_mse = 0.0;
    double pitch_mse = 0.0;
    double energy_mse = 0.0;
  };
  LossOut Loss(const std::vector<int>& phonemes, const VarianceTargets& targets,
               const Tensor& mel_target, RngStream* rng, bool train) const;

  void CollectParams(std::vector<NamedParam>* out);

  // Exposed for block-level tests.
  const FftBlock& encoder_block(int i) const { return encoder_[static_cast<size_t>(i)]; }
  Var PitchEmbeddingTable() const { return pitch_embed_.table(); }
  Var EnergyEmbeddingTable() const { return energy_embed_.table(); }

 private:
  Var PositionalSlice(int64_t length) const;
  std::vector<int> QuantizeToBins(const std::vector<double>& v, double lo,
                                  double hi, int bins) const;

  TargetModelConfig cfg_;
  VarianceRanges ranges_;
  Embedding embed_;
  Linear input_proj_;
  std::vector<FftBlock> encoder_;
  VariancePredictor dur_pred_, pitch_pred_, energy_pred_;
  Embedding pitch_embed_, energy_embed_;
  std::vector<FftBlock> decoder_;
  Linear mel_proj_;
  std::vector<Conv1dLayer> postnet_;
  Var pos_cache_;  // sinusoidal table, sliced per sequence length
};

}  // namespace ttsaug

#endif  // TTSAUG_TARGET_TTS_H_

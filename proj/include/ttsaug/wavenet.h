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

#ifndef TTSAUG_WAVENET_H_
#define TTSAUG_WAVENET_H_

#include <vector>

#include "ttsaug/nn.h"

namespace ttsaug {

struct WaveNetStackConfig {
  std::vector<int> dilation_cycle = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  int cycles = 3;
  int layers = 30;
  int64_t residual_channels = 128;
  int64_t skip_channels = 128;
  int kernel = 2;
  bool causal = true;
  int64_t in_channels = 1;
  int64_t cond_channels = 0;  // 0 disables conditioning
  int64_t out_params = 2;

  std::vector<int> Dilations() const;
  void Validate() const;
};

// Receptive field in samples. The causal stack counts the emitted sample
// itself; the non-causal stack is symmetric around it.
int64_t ReceptiveField(const WaveNetStackConfig& cfg);

// Gated dilated convolution stack with residual and skip paths; weight
// normalization on every convolution.
class WaveNetStack {
 public:
  WaveNetStack() = default;
  WaveNetStack(const WaveNetStackConfig& cfg, RngStream* rng);

  const WaveNetStackConfig& config() const { return cfg_; }

  // x [T, in_channels], cond [T, cond_channels] (undefined Var if none).
  Var Forward(const Var& x, const Var& cond) const;

  void CollectParams(const std::string& prefix, std::vector<NamedParam>* out);

  // Zeroes the final 1x1 projection (used by tests and adversarial warmup).
  void ZeroFinalLayer();

  struct LayerRef {
    const Conv1dLayer* dilated;
    const Conv1dLayer* cond_proj;  // nullptr without conditioning
    const Conv1dLayer* res_proj;
    const Conv1dLayer* skip_proj;
  };
  LayerRef layer(int i) const;
  const Conv1dLayer& input_conv() const { return input_conv_; }
  const Conv1dLayer& out1() const { return out1_; }
  const Conv1dLayer& out2() const { return out2_; }

 private:
  struct Layer {
    Conv1dLayer dilated;    // k, res -> 2*res, gated
    Conv1dLayer cond_proj;  // 1x1 cond -> 2*res
    Conv1dLayer res_proj;   // 1x1 res -> res
    Conv1dLayer skip_proj;  // 1x1 res -> skip
  };
  WaveNetStackConfig cfg_;
  Conv1dLayer input_conv_;  // 1x1 in -> res
  std::vector<Layer> layers_;
  Conv1dLayer out1_;  // 1x1 skip -> skip
  Conv1dLayer out2_;  // 1x1 skip -> out_params
};

// Incremental evaluation of a causal stack for sample-by-sample generation,
// batched over utterances so the per-sample work is a handful of GEMMs.
class WaveNetFastInference {
 public:
  WaveNetFastInference(const WaveNetStack& stack, int batch);

  // x_t: [batch] current input sample (already the previous output);
  // cond_t: [batch, cond_channels]; out: [batch, out_params].
  void Step(const std::vector<double>& x_t, const Tensor& cond_t, Tensor* out);
  void Reset();

 private:
  struct LayerState {
    // Ring buffer of this layer's input rows, capacity (k-1)*d + 1.
    std::vector<Tensor> ring;
    int head = 0;
    // Effective weights per tap: [cin, cout] each.
    std::vector<Tensor> taps;
    Tensor bias;
    Tensor cond_w;  // [cond, 2*res]
    Tensor cond_b;
    Tensor res_w, res_b;
    Tensor skip_w, skip_b;
    int dilation = 1;
  };
  int batch_ = 0;
  WaveNetStackConfig cfg_;
  Tensor in_w_, in_b_;
  std::vector<LayerState> layers_;
  Tensor out1_w_, out1_b_, out2_w_, out2_b_;
  int64_t t_ = 0;
};

// Frame-rate conditioning to sample rate: nearest-neighbor repeat by hop
// followed by two learned non-causal convolutions.
class ConditionUpsampler {
 public:
  ConditionUpsampler() = default;
  ConditionUpsampler(int64_t in_dim, int64_t out_channels, int kernel, int hop,
                     RngStream* rng);
  // [T, in_dim] -> [T * hop, out_channels]
  Var Forward(const Var& frame_features) const;
  void CollectParams(const std::string& prefix, std::vector<NamedParam>* out);
  int hop() const { return hop_; }

 private:
  Conv1dLayer conv1_, conv2_;
  int hop_ = 1;
};

}  // namespace ttsaug

#endif  // TTSAUG_WAVENET_H_

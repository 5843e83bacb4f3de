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

#ifndef TTSAUG_PWG_H_
#define TTSAUG_PWG_H_

#include <vector>

#include "ttsaug/optim.h"
#include "ttsaug/stft_loss.h"
#include "ttsaug/wavenet.h"

namespace ttsaug {

struct PwgGeneratorConfig {
  WaveNetStackConfig stack;  // non-causal, out_params 1
  int cond_kernel = 3;

  void Validate() const;
};

struct PwgDiscriminatorConfig {
  int layers = 10;
  int kernel = 3;
  int64_t channels = 64;
  double leaky_alpha = 0.2;

  void Validate() const;
};

// Non-causal one-shot waveform generator: noise in, waveform out, mel
// conditioning upsampled to the sample rate.
class PwgGenerator {
 public:
  PwgGenerator() = default;
  PwgGenerator(const PwgGeneratorConfig& cfg, int64_t feature_dim,
               int hop_samples, uint64_t seed);

  const PwgGeneratorConfig& config() const { return cfg_; }
  int hop_samples() const { return hop_samples_; }

  // noise [N, 1] with N = frames * hop; output [N, 1].
  Var Forward(const Var& noise, const Var& cond_frames) const;
  std::vector<double> Synthesize(const Tensor& cond_frames,
                                 RngStream* noise_rng) const;

  void CollectParams(std::vector<NamedParam>* out);
  WaveNetStack* stack() { return &stack_; }

 private:
  PwgGeneratorConfig cfg_;
  int hop_samples_ = 0;
  ConditionUpsampler upsampler_;
  WaveNetStack stack_;
};

class PwgDiscriminator {
 public:
  PwgDiscriminator() = default;
  PwgDiscriminator(const PwgDiscriminatorConfig& cfg, uint64_t seed);
  // [N, 1] waveform -> [N, 1] per-sample scores.
  Var Forward(const Var& x) const;
  void CollectParams(std::vector<NamedParam>* out);

 private:
  PwgDiscriminatorConfig cfg_;
  std::vector<Conv1dLayer> convs_;
};

struct PwgTrainConfig {
  StftLossConfig stft;
  double lambda_adv = 4.0;
  int64_t discriminator_start_step = 200;

  void Validate() const;
};

struct PwgItem {
  std::vector<double> samples;  // length = cond frames * hop
  Tensor cond;                  // [T, feature_dim]
};

struct PwgStepStats {
  double stft_sc = 0.0;
  double stft_mag = 0.0;
  double adversarial = 0.0;
  double gen_total = 0.0;
  double disc_loss = 0.0;
  bool disc_active = false;
};

// One adversarial training step: generator first (STFT loss plus, after the
// warmup, the least-squares adversarial term), then the discriminator on
// real versus detached fake.
PwgStepStats PwgTrainStep(const std::vector<const PwgItem*>& batch,
                          PwgGenerator* generator, PwgDiscriminator* discriminator,
                          Adam* gen_opt, Adam* disc_opt,
                          const StftLossComputer& stft, const PwgTrainConfig& cfg,
                          int64_t step, RngStream* noise_rng);

}  // namespace ttsaug

#endif  // TTSAUG_PWG_H_

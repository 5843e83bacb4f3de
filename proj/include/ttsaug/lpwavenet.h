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

#ifndef TTSAUG_LPWAVENET_H_
#define TTSAUG_LPWAVENET_H_

#include <vector>

#include "ttsaug/lpc.h"
#include "ttsaug/stft_loss.h"
#include "ttsaug/wavenet.h"

namespace ttsaug {

struct LpWaveNetConfig {
  WaveNetStackConfig stack;  // causal, out_params 2 (Gaussian mean, log scale)
  LpcConfig lpc;
  int cond_kernel = 3;
  double log_scale_floor = -7.0;
  double scale_reduction_voiced = 0.85;

  void Validate() const;
};

// Autoregressive Gaussian vocoder whose mean is shifted by a linear
// prediction over past samples; the network models the residual statistics.
class LpWaveNetVocoder {
 public:
  LpWaveNetVocoder(const LpWaveNetConfig& cfg, int64_t feature_dim,
                   const Tensor& mel_filterbank, int nfft, int hop_samples,
                   uint64_t seed);

  const LpWaveNetConfig& config() const { return cfg_; }
  int hop_samples() const { return hop_samples_; }

  // Per-utterance precomputation shared by training and synthesis.
  struct Analysis {
    Tensor cond;                            // [T, feature_dim], normalized
    std::vector<std::vector<double>> lpc;   // per-frame prediction coefficients
    std::vector<uint8_t> voicing;           // per frame
    bool lpc_clamped = false;
  };
  Analysis Analyze(const Tensor& cond_features, const Tensor& mel_physical,
                   const std::vector<uint8_t>& voicing) const;

  // Teacher-forced NLL over an utterance or hop-aligned crop of it.
  Var Nll(const std::vector<double>& samples, const Analysis& a) const;

  struct SynthesisResult {
    std::vector<double> samples;        // length = frames * hop
    std::vector<double> scale_factors;  // applied voiced/unvoiced multiplier
  };
  SynthesisResult Synthesize(const Analysis& a, RngStream* noise_rng) const;

  // Lockstep batched synthesis; each item draws from its own noise stream so
  // results do not depend on batch composition.
  std::vector<std::vector<double>> SynthesizeBatch(
      const std::vector<const Analysis*>& items,
      const std::vector<uint64_t>& noise_seeds) const;

  void CollectParams(std::vector<NamedParam>* out);

 private:
  LpWaveNetConfig cfg_;
  int hop_samples_ = 0;
  LpcAnalyzer analyzer_;
  ConditionUpsampler upsampler_;
  WaveNetStack stack_;
};

}  // namespace ttsaug

#endif  // TTSAUG_LPWAVENET_H_

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

#ifndef TTSAUG_STFT_LOSS_H_
#define TTSAUG_STFT_LOSS_H_

#include <vector>

#include "ttsaug/autograd.h"

namespace ttsaug {

struct StftResolution {
  int fft_size = 1024;
  int hop = 120;
  int window = 600;
};

struct StftLossConfig {
  std::vector<StftResolution> resolutions = {
      {1024, 120, 600}, {2048, 240, 1200}, {512, 50, 240}};
  double magnitude_floor = 1e-7;

  void Validate() const;
};

struct StftLossOut {
  Var spectral_convergence;  // ||M_ref - M_gen||_F / ||M_ref||_F, averaged
  Var log_magnitude;         // mean |log M_ref - log M_gen|, averaged
};

// Differentiable multi-resolution STFT magnitude loss. The DFT bases are
// precomputed once; both terms are zero iff the magnitudes agree at every
// resolution.
class StftLossComputer {
 public:
  explicit StftLossComputer(StftLossConfig cfg);

  // reference first: the convergence term normalizes by the reference.
  StftLossOut Loss(const Var& reference, const Var& generated) const;
  const StftLossConfig& config() const { return cfg_; }

  // Magnitude frames [F, bins] of a 1-D signal at resolution r.
  Var Magnitude(const Var& signal, size_t r) const;

 private:
  struct Basis {
    StftResolution res;
    Var window;   // [window]
    Var cos_mat;  // [window, bins]
    Var sin_mat;  // [window, bins]
  };
  StftLossConfig cfg_;
  std::vector<Basis> bases_;
};

// Single-pair Gaussian negative log-likelihood (scalar helper mirrored by the
// autograd composition in the vocoder).
double GaussianNllScalar(double x, double mean, double log_scale);

// Elementwise NLL over tensors with a log-scale floor; mean-reduced.
Var GaussianNll(const Var& x, const Var& mean, const Var& log_scale,
                double log_scale_floor);

}  // namespace ttsaug

#endif  // TTSAUG_STFT_LOSS_H_

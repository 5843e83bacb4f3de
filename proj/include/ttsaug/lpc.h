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

#ifndef TTSAUG_LPC_H_
#define TTSAUG_LPC_H_

#include <vector>

#include "ttsaug/tensor.h"

namespace ttsaug {

struct LpcConfig {
  int order = 16;
  double power_floor = 1e-10;

  void Validate() const;
};

struct LpcResult {
  std::vector<double> coeffs;  // prediction coefficients a_1..a_p
  bool clamped = false;        // a reflection coefficient was pulled inside the unit circle
};

// Levinson-Durbin on autocorrelation r[0..order]; returns prediction
// coefficients of x_hat[t] = sum_i a_i x[t-i]. Reflection coefficients are
// clamped to |k| <= 0.999 which keeps the all-pole filter stable.
LpcResult LevinsonDurbin(const std::vector<double>& autocorr, int order);

// Derives LPC from a log-mel frame: pseudo-inverse filterbank back to a
// linear power spectrum, inverse transform to autocorrelation, then the
// recursion above.
class LpcAnalyzer {
 public:
  LpcAnalyzer(const Tensor& mel_filterbank, int nfft, LpcConfig cfg);

  LpcResult Analyze(const std::vector<double>& log_mel_frame) const;
  int order() const { return cfg_.order; }

 private:
  LpcConfig cfg_;
  int nfft_ = 0;
  Tensor pinv_;  // [nfreq, mel_bins]
};

// x_hat = sum_i a_i past[i-1] where past[0] is the most recent sample.
double LpPrediction(const double* past, const std::vector<double>& coeffs);

}  // namespace ttsaug

#endif  // TTSAUG_LPC_H_

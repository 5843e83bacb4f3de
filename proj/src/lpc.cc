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

#include "ttsaug/lpc.h"

#include <Eigen/Dense>

#include <cmath>

#include "ttsaug/common.h"

namespace ttsaug {

void LpcConfig::Validate() const {
  TTSAUG_CHECK(order >= 1, ConfigError, "lpc order must be >= 1");
  TTSAUG_CHECK(power_floor > 0.0, ConfigError, "power floor must be positive");
}

LpcResult LevinsonDurbin(const std::vector<double>& autocorr, int order) {
  TTSAUG_CHECK(static_cast<int>(autocorr.size()) >= order + 1, ShapeError,
               "autocorrelation too short for the requested order");
  LpcResult res;
  res.coeffs.assign(static_cast<size_t>(order), 0.0);
  const double r0 = autocorr[0];
  if (!(r0 > 0.0)) return res;  // silent frame, all-zero predictor
  TTSAUG_CHECK(std::isfinite(r0), NumericError, "non-finite autocorrelation");

  std::vector<double> a(static_cast<size_t>(order), 0.0);
  double err = r0;
  for (int m = 1; m <= order; ++m) {
    TTSAUG_CHECK(std::isfinite(autocorr[static_cast<size_t>(m)]), NumericError,
                 "non-finite autocorrelation");
    double acc = autocorr[static_cast<size_t>(m)];
    for (int i = 1; i < m; ++i)
      acc -= a[static_cast<size_t>(i) - 1] * autocorr[static_cast<size_t>(m - i)];
    double k = acc / err;
    if (!(std::abs(k) < 1.0)) {
      k = std::copysign(0.999, k);
      res.clamped = true;
    }
    std::vector<double> next = a;
    next[static_cast<size_t>(m) - 1] = k;
    for (int i = 1; i < m; ++i)
      next[static_cast<size_t>(i) - 1] =
          a[static_cast<size_t>(i) - 1] - k * a[static_cast<size_t>(m - i) - 1];
    a = std::move(next);
    err *= (1.0 - k * k);
    if (err < 1e-300) err = 1e-300;
  }
  res.coeffs = std::move(a);
  return res;
}

LpcAnalyzer::LpcAnalyzer(const Tensor& mel_filterbank, int nfft, LpcConfig cfg)
    : cfg_(cfg), nfft_(nfft) {
  cfg.Validate();
  TTSAUG_CHECK(mel_filterbank.ndim() == 2 &&
                   mel_filterbank.dim(1) == nfft / 2 + 1,
               ShapeError, "filterbank shape does not match fft size");
  const int64_t m = mel_filterbank.dim(0);
  const int64_t k = mel_filterbank.dim(1);
  Eigen::MatrixXd fb(m, k);
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < k; ++j) fb(i, j) = mel_filterbank.at(i, j);
  Eigen::MatrixXd pinv = fb.completeOrthogonalDecomposition().pseudoInverse();
  pinv_ = Tensor({k, m});
  for (int64_t i = 0; i < k; ++i)
    for (int64_t j = 0; j < m; ++j) pinv_.at(i, j) = pinv(i, j);
}

LpcResult LpcAnalyzer::Analyze(const std::vector<double>& log_mel_frame) const {
  const int64_t m = pinv_.dim(1);
  const int64_t k = pinv_.dim(0);
  TTSAUG_CHECK(static_cast<int64_t>(log_mel_frame.size()) == m, ShapeError,
               "mel frame size does not match analyzer");
  std::vector<double> mel_power(static_cast<size_t>(m));
  for (int64_t i = 0; i < m; ++i) {
    const double v = log_mel_frame[static_cast<size_t>(i)];
    TTSAUG_CHECK(std::isfinite(v), NumericError, "non-finite mel value");
    mel_power[static_cast<size_t>(i)] = std::exp(v);
  }
  std::vector<double> power(static_cast<size_t>(k));
  for (int64_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (int64_t j = 0; j < m; ++j)
      s += pinv_.at(i, j) * mel_power[static_cast<size_t>(j)];
    power[static_cast<size_t>(i)] = std::max(s, cfg_.power_floor);
  }
  // Autocorrelation of the symmetric spectrum, evaluated directly for the
  // handful of lags the recursion needs.
  std::vector<double> r(static_cast<size_t>(cfg_.order) + 1, 0.0);
  const int n = nfft_;
  for (int tau = 0; tau <= cfg_.order; ++tau) {
    double s = power[0];
    for (int j = 1; j < n / 2; ++j)
      s += 2.0 * power[static_cast<size_t>(j)] *
           std::cos(2.0 * M_PI * j * tau / static_cast<double>(n));
    s += power[static_cast<size_t>(n / 2)] * std::cos(M_PI * tau);
    r[static_cast<size_t>(tau)] = s / static_cast<double>(n);
  }
  return LevinsonDurbin(r, cfg_.order);
}

double LpPrediction(const double* past, const std::vector<double>& coeffs) {
  double s = 0.0;
  for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * past[i];
  return s;
}

}  // namespace ttsaug

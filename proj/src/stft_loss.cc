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

#include "ttsaug/stft_loss.h"

#include <cmath>

#include "ttsaug/dsp.h"

namespace ttsaug {

void StftLossConfig::Validate() const {
  TTSAUG_CHECK(!resolutions.empty(), ConfigError, "no stft resolutions");
  for (const auto& r : resolutions) {
    TTSAUG_CHECK(r.hop >= 1 && r.hop < r.window && r.window <= r.fft_size,
                 ConfigError, "stft resolution must satisfy hop < window <= fft");
    TTSAUG_CHECK(IsPowerOfTwo(r.fft_size), ConfigError,
                 "stft fft size must be a power of two");
  }
  TTSAUG_CHECK(magnitude_floor > 0.0, ConfigError, "magnitude floor must be > 0");
}

StftLossComputer::StftLossComputer(StftLossConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.Validate();
  for (const auto& r : cfg_.resolutions) {
    Basis b;
    b.res = r;
    b.window = Var::Const(Tensor::FromVector(HannWindow(r.window)));
    const int bins = r.fft_size / 2 + 1;
    Tensor cos_mat({r.window, bins});
    Tensor sin_mat({r.window, bins});
    for (int n = 0; n < r.window; ++n) {
      for (int k = 0; k < bins; ++k) {
        const double ang = 2.0 * M_PI * static_cast<double>(n) *
                           static_cast<double>(k) / static_cast<double>(r.fft_size);
        cos_mat.at(n, k) = std::cos(ang);
        sin_mat.at(n, k) = -std::sin(ang);
      }
    }
    b.cos_mat = Var::Const(std::move(cos_mat));
    b.sin_mat = Var::Const(std::move(sin_mat));
    bases_.push_back(std::move(b));
  }
}

Var StftLossComputer::Magnitude(const Var& signal, size_t r) const {
  const Basis& b = bases_[r];
  TTSAUG_CHECK(signal.value().ndim() == 1, ShapeError, "stft input must be 1-D");
  TTSAUG_CHECK(signal.value().size() >= b.res.window, ShapeError,
               "signal shorter than the stft window");
  Var frames = FrameSignal(signal, b.res.window, b.res.hop);
  frames = MulRow(frames, b.window);
  Var re = MatMul(frames, b.cos_mat);
  Var im = MatMul(frames, b.sin_mat);
  // Small epsilon inside the root keeps the gradient finite at zero energy.
  Var mag = Sqrt(AddScalar(Add(Square(re), Square(im)), 1e-14));
  return mag;
}

StftLossOut StftLossComputer::Loss(const Var& reference, const Var& generated) const {
  TTSAUG_CHECK(reference.value().size() == generated.value().size(), ShapeError,
               "stft loss signals must have equal length");
  Var sc_total, mag_total;
  for (size_t r = 0; r < bases_.size(); ++r) {
    Var m_ref = Magnitude(reference, r);
    Var m_gen = Magnitude(generated, r);
    Var diff = Sub(m_ref, m_gen);
    Var sc = Sqrt(AddScalar(Sum(Square(diff)), 1e-30));
    Var ref_norm = Sqrt(AddScalar(Sum(Square(m_ref)), 1e-30));
    // ||A - B||_F / ||A||_F via log-exp free division.
    Var sc_term = Mul(sc, Exp(Scale(Log(ref_norm), -1.0)));
    Var mag_term = L1Loss(Log(ClampMin(m_ref, cfg_.magnitude_floor)),
                          Log(ClampMin(m_gen, cfg_.magnitude_floor)));
    sc_total = sc_total.defined() ? Add(sc_total, sc_term) : sc_term;
    mag_total = mag_total.defined() ? Add(mag_total, mag_term) : mag_term;
  }
  const double inv = 1.0 / static_cast<double>(bases_.size());
  return {Scale(sc_total, inv), Scale(mag_total, inv)};
}

double GaussianNllScalar(double x, double mean, double log_scale) {
  const double inv_sigma = std::exp(-log_scale);
  const double z = (x - mean) * inv_sigma;
  return 0.5 * z * z + log_scale + 0.5 * std::log(2.0 * M_PI);
}

Var GaussianNll(const Var& x, const Var& mean, const Var& log_scale,
                double log_scale_floor) {
  Var s = ClampMin(log_scale, log_scale_floor);
  Var diff = Sub(x, mean);
  Var inv_var = Exp(Scale(s, -2.0));
  Var quad = Scale(Mul(Square(diff), inv_var), 0.5);
  Var nll = Add(Add(quad, s), Var::Const(Tensor::Full(s.value().shape(),
                                                      0.5 * std::log(2.0 * M_PI))));
  return Mean(nll);
}

}  // namespace ttsaug

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

#include "ttsaug/dsp.h"

#include <cmath>

#include "ttsaug/common.h"

namespace ttsaug {

bool IsPowerOfTwo(int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

void Fft(std::vector<std::complex<double>>* a, bool inverse) {
  const size_t n = a->size();
  TTSAUG_CHECK(IsPowerOfTwo(static_cast<int64_t>(n)), ConfigError,
               "fft size must be a power of two");
  auto& x = *a;
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = x[i + j];
        const std::complex<double> v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::vector<double> PowerSpectrum(const std::vector<double>& frame, int nfft) {
  TTSAUG_CHECK(static_cast<int>(frame.size()) <= nfft, ConfigError,
               "frame longer than fft size");
  std::vector<std::complex<double>> buf(static_cast<size_t>(nfft));
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  Fft(&buf, false);
  std::vector<double> p(static_cast<size_t>(nfft / 2 + 1));
  for (size_t k = 0; k < p.size(); ++k) p[k] = std::norm(buf[k]);
  return p;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Tensor MakeMelFilterbank(int mel_bins, int nfft, double sample_rate, double fmin,
                         double fmax) {
  TTSAUG_CHECK(mel_bins >= 1, ConfigError, "mel_bins >= 1");
  TTSAUG_CHECK(fmax > fmin && fmax <= sample_rate / 2.0 + 1e-9, ConfigError,
               "mel band must satisfy fmin < fmax <= nyquist");
  const int nfreq = nfft / 2 + 1;
  const double mel_lo = HzToMel(fmin);
  const double mel_hi = HzToMel(fmax);
  std::vector<double> edges(static_cast<size_t>(mel_bins) + 2);
  for (int m = 0; m < mel_bins + 2; ++m)
    edges[static_cast<size_t>(m)] =
        MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(m) /
                             static_cast<double>(mel_bins + 1));
  Tensor fb({mel_bins, nfreq});
  for (int m = 0; m < mel_bins; ++m) {
    const double f_lo = edges[static_cast<size_t>(m)];
    const double f_c = edges[static_cast<size_t>(m) + 1];
    const double f_hi = edges[static_cast<size_t>(m) + 2];
    for (int k = 0; k < nfreq; ++k) {
      const double f = sample_rate * static_cast<double>(k) / static_cast<double>(nfft);
      double w = 0.0;
      if (f > f_lo && f < f_hi) {
        w = f <= f_c ? (f - f_lo) / (f_c - f_lo) : (f_hi - f) / (f_hi - f_c);
      }
      fb.at(m, k) = w;
    }
  }
  return fb;
}

std::vector<double> ReflectPad(const std::vector<double>& x, int64_t left,
                               int64_t right) {
  const int64_t n = static_cast<int64_t>(x.size());
  TTSAUG_CHECK(n >= 2, DataError, "reflect pad needs at least 2 samples");
  TTSAUG_CHECK(left < n && right < n, DataError, "reflect pad longer than signal");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n + left + right));
  for (int64_t i = left; i >= 1; --i) out.push_back(x[static_cast<size_t>(i)]);
  out.insert(out.end(), x.begin(), x.end());
  for (int64_t i = 2; i <= right + 1; ++i) out.push_back(x[static_cast<size_t>(n - i)]);
  return out;
}

}  // namespace ttsaug

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

#ifndef TTSAUG_DSP_H_
#define TTSAUG_DSP_H_

#include <complex>
#include <vector>

#include "ttsaug/tensor.h"

namespace ttsaug {

// In-place iterative radix-2 FFT; size must be a power of two. The inverse
// transform includes the 1/N factor.
void Fft(std::vector<std::complex<double>>* a, bool inverse);

bool IsPowerOfTwo(int64_t n);

// Periodic Hann window.
std::vector<double> HannWindow(int n);

// Power spectrum |X[k]|^2 for k = 0..nfft/2 of a zero-padded real frame.
std::vector<double> PowerSpectrum(const std::vector<double>& frame, int nfft);

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular mel filterbank, weights [mel_bins, nfft/2 + 1].
Tensor MakeMelFilterbank(int mel_bins, int nfft, double sample_rate,
                         double fmin, double fmax);

// Mirror-pads a signal: [.. x2 x1] x0 x1 .. xn [x(n-1) x(n-2) ..].
std::vector<double> ReflectPad(const std::vector<double>& x, int64_t left,
                               int64_t right);

}  // namespace ttsaug

#endif  // TTSAUG_DSP_H_

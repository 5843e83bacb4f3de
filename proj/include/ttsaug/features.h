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

#ifndef TTSAUG_FEATURES_H_
#define TTSAUG_FEATURES_H_

#include <string>
#include <vector>

#include "ttsaug/tensor.h"

namespace ttsaug {

struct AudioClip {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 24000;
};

struct FeatureConfig {
  int mel_bins = 80;
  double hop_seconds = 0.010;
  double window_seconds = 0.025;
  int fft_size = 1024;
  double fmin = 0.0;
  double fmax = 0.0;  // 0 selects nyquist
  double log_floor = 1e-10;
  enum class Padding { kNone, kCenter } padding = Padding::kCenter;
  // Autocorrelation pitch search band and voicing decision.
  double pitch_fmin = 70.0;
  double pitch_fmax = 400.0;
  double voicing_threshold = 0.45;
  double voicing_rms_floor = 1e-4;

  int HopSamples(int sample_rate) const;
  int WindowSamples(int sample_rate) const;
  double EffectiveFmax(int sample_rate) const;
  void Validate(int sample_rate) const;
};

// Frame-aligned acoustic features for one utterance.
struct AcousticFrameSequence {
  Tensor mel;                   // [frames, mel_bins], log amplitude
  std::vector<double> pitch;    // Hz; 0 exactly on unvoiced frames
  std::vector<double> energy;   // per-frame RMS, >= 0
  std::vector<uint8_t> voicing;

  int64_t frames() const { return mel.empty() ? 0 : mel.dim(0); }
  void Validate() const;
};

int64_t FrameCount(int64_t num_samples, int window, int hop,
                   FeatureConfig::Padding padding);

Tensor MelSpectrogram(const AudioClip& clip, const FeatureConfig& cfg);
void ExtractPitch(const AudioClip& clip, const FeatureConfig& cfg,
                  std::vector<double>* pitch, std::vector<uint8_t>* voicing);
std::vector<double> FrameEnergy(const AudioClip& clip, const FeatureConfig& cfg);
// All three extractors on one clip; frame counts agree by construction.
AcousticFrameSequence ExtractFeatures(const AudioClip& clip,
                                      const FeatureConfig& cfg);

// Mean of values over the frame segment of each phoneme.
std::vector<double> PhonemeAverage(const std::vector<double>& values,
                                   const std::vector<int>& durations);
// Pitch averaging counts voiced frames only; a segment with no voiced frame
// gets 0.
std::vector<double> PhonemeAveragePitch(const std::vector<double>& pitch,
                                        const std::vector<uint8_t>& voicing,
                                        const std::vector<int>& durations);
Tensor PhonemeAverageRows(const Tensor& values, const std::vector<int>& durations);

// Per-dimension zero-mean/unit-variance statistics.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // clamped to the floor

  static NormStats Fit(const std::vector<const Tensor*>& mats,
                       double floor = 1e-8);
  Tensor Apply(const Tensor& x) const;
  Tensor Invert(const Tensor& x) const;
  double ApplyScalar(double v, size_t dim = 0) const;
  double InvertScalar(double v, size_t dim = 0) const;
};

// Pitch is normalized in log-Hz over voiced frames; 0 stays 0.
struct PitchNormalizer {
  double mean = 5.0;
  double stddev = 1.0;

  static PitchNormalizer Fit(const std::vector<double>& voiced_hz,
                             double floor = 1e-8);
  double Apply(double hz) const;
  double Invert(double v) const;
};

struct FeatureNormalizer {
  NormStats mel;
  PitchNormalizer pitch;
  NormStats energy;

  void Save(const std::string& path) const;  // plain-text key/value
  static FeatureNormalizer Load(const std::string& path);
};

// Fits the normalizer over a training set of extracted features.
FeatureNormalizer FitFeatureNormalizer(
    const std::vector<const AcousticFrameSequence*>& train_set);

// Model-facing frame matrix [T, mel_bins + 3]: normalized mel, normalized
// log-pitch (0 when unvoiced), normalized energy, voicing in {0,1}.
Tensor PackAcousticFrames(const AcousticFrameSequence& f,
                          const FeatureNormalizer& norm);
AcousticFrameSequence UnpackAcousticFrames(const Tensor& packed,
                                           const FeatureNormalizer& norm,
                                           double voicing_threshold = 0.5);

// Feature cache: little-endian float32 records with a frame-count/dim header.
void SaveFeatureCache(const std::string& path, const AcousticFrameSequence& f);
AcousticFrameSequence LoadFeatureCache(const std::string& path);

}  // namespace ttsaug

#endif  // TTSAUG_FEATURES_H_

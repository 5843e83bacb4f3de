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

#include "ttsaug/features.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ttsaug/common.h"
#include "ttsaug/dsp.h"

namespace ttsaug {

int FeatureConfig::HopSamples(int sample_rate) const {
  return static_cast<int>(std::lround(hop_seconds * sample_rate));
}

int FeatureConfig::WindowSamples(int sample_rate) const {
  return static_cast<int>(std::lround(window_seconds * sample_rate));
}

double FeatureConfig::EffectiveFmax(int sample_rate) const {
  return fmax > 0.0 ? fmax : sample_rate / 2.0;
}

void FeatureConfig::Validate(int sample_rate) const {
  TTSAUG_CHECK(sample_rate > 0, ConfigError, "sample rate must be positive");
  TTSAUG_CHECK(mel_bins >= 1, ConfigError, "mel_bins >= 1");
  TTSAUG_CHECK(hop_seconds > 0 && hop_seconds <= window_seconds, ConfigError,
               "hop must be positive and not exceed the window");
  TTSAUG_CHECK(fft_size >= WindowSamples(sample_rate), ConfigError,
               "fft_size must cover the analysis window");
  TTSAUG_CHECK(IsPowerOfTwo(fft_size), ConfigError, "fft_size must be a power of two");
  TTSAUG_CHECK(log_floor > 0.0, ConfigError, "log_floor must be positive");
  TTSAUG_CHECK(pitch_fmin > 0 && pitch_fmax > pitch_fmin, ConfigError,
               "pitch band must satisfy 0 < fmin < fmax");
  const int lag_max = static_cast<int>(sample_rate / pitch_fmin);
  TTSAUG_CHECK(lag_max < WindowSamples(sample_rate), ConfigError,
               "analysis window too short for the lowest pitch lag");
}

void AcousticFrameSequence::Validate() const {
  const auto T = static_cast<size_t>(frames());
  TTSAUG_CHECK(pitch.size() == T && energy.size() == T && voicing.size() == T,
               AlignmentError, "feature rows have different frame counts");
  for (size_t t = 0; t < T; ++t) {
    TTSAUG_CHECK((pitch[t] == 0.0) == (voicing[t] == 0), DataError,
                 "pitch must be 0 exactly on unvoiced frames");
    TTSAUG_CHECK(energy[t] >= 0.0, DataError, "negative frame energy");
  }
  TTSAUG_CHECK(mel.AllFinite(), NumericError, "non-finite mel values");
}

int64_t FrameCount(int64_t num_samples, int window, int hop,
                   FeatureConfig::Padding padding) {
  const int64_t padded = padding == FeatureConfig::Padding::kCenter
                             ? num_samples + 2 * (window / 2)
                             : num_samples;
  TTSAUG_CHECK(padded >= window, DataError,
               "length error: clip shorter than one analysis window");
  return (padded - window) / hop + 1;
}

namespace {

// Framed view of the (optionally reflect-padded) signal.
std::vector<double> PreparedSignal(const AudioClip& clip, const FeatureConfig& cfg,
                                   int* window_out, int* hop_out, int64_t* frames_out) {
  cfg.Validate(clip.sample_rate);
  const int window = cfg.WindowSamples(clip.sample_rate);
  const int hop = cfg.HopSamples(clip.sample_rate);
  const int64_t n = static_cast<int64_t>(clip.samples.size());
  const int64_t frames = FrameCount(n, window, hop, cfg.padding);
  *window_out = window;
  *hop_out = hop;
  *frames_out = frames;
  if (cfg.padding == FeatureConfig::Padding::kCenter) {
    return ReflectPad(clip.samples, window / 2, window / 2);
  }
  return clip.samples;
}

}  // namespace

Tensor MelSpectrogram(const AudioClip& clip, const FeatureConfig& cfg) {
  int window = 0, hop = 0;
  int64_t frames = 0;
  const std::vector<double> sig = PreparedSignal(clip, cfg, &window, &hop, &frames);
  const std::vector<double> win = HannWindow(window);
  const Tensor fb = MakeMelFilterbank(cfg.mel_bins, cfg.fft_size, clip.sample_rate,
                                      cfg.fmin, cfg.EffectiveFmax(clip.sample_rate));
  Tensor mel({frames, cfg.mel_bins});
  std::vector<double> frame(static_cast<size_t>(window));
  for (int64_t t = 0; t < frames; ++t) {
    for (int i = 0; i < window; ++i)
      frame[static_cast<size_t>(i)] =
          sig[static_cast<size_t>(t * hop + i)] * win[static_cast<size_t>(i)];
    const std::vector<double> power = PowerSpectrum(frame, cfg.fft_size);
    for (int m = 0; m < cfg.mel_bins; ++m) {
      double e = 0.0;
      for (size_t k = 0; k < power.size(); ++k)
        e += fb.at(m, static_cast<int64_t>(k)) * power[k];
      mel.at(t, m) = std::log(std::max(e, cfg.log_floor));
    }
  }
  return mel;
}

void ExtractPitch(const AudioClip& clip, const FeatureConfig& cfg,
                  std::vector<double>* pitch, std::vector<uint8_t>* voicing) {
  int window = 0, hop = 0;
  int64_t frames = 0;
  const std::vector<double> sig = PreparedSignal(clip, cfg, &window, &hop, &frames);
  const int lag_min =
      std::max(1, static_cast<int>(clip.sample_rate / cfg.pitch_fmax));
  const int lag_max = static_cast<int>(clip.sample_rate / cfg.pitch_fmin);
  const int m = window - lag_max;  // correlation span, > 0 by Validate()
  pitch->assign(static_cast<size_t>(frames), 0.0);
  voicing->assign(static_cast<size_t>(frames), 0);

  std::vector<double> nccf(static_cast<size_t>(lag_max) + 1, 0.0);
  for (int64_t t = 0; t < frames; ++t) {
    const double* x = sig.data() + t * hop;
    double energy0 = 0.0;
    for (int i = 0; i < m; ++i) energy0 += x[i] * x[i];
    double rms = 0.0;
    for (int i = 0; i < window; ++i) rms += x[i] * x[i];
    rms = std::sqrt(rms / window);
    if (rms < cfg.voicing_rms_floor || energy0 <= 0.0) continue;

    double best = -1.0;
    int best_lag = 0;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      double cross = 0.0, energy_l = 0.0;
      const double* y = x + lag;
      for (int i = 0; i < m; ++i) {
        cross += x[i] * y[i];
        energy_l += y[i] * y[i];
      }
      const double denom = std::sqrt(energy0 * energy_l);
      const double v = denom > 0.0 ? cross / denom : 0.0;
      nccf[static_cast<size_t>(lag)] = v;
      if (v > best) {
        best = v;
        best_lag = lag;
      }
    }
    if (best < cfg.voicing_threshold) continue;

    double refined = best_lag;
    if (best_lag > lag_min && best_lag < lag_max) {
      const double l = nccf[static_cast<size_t>(best_lag) - 1];
      const double c = nccf[static_cast<size_t>(best_lag)];
      const double r = nccf[static_cast<size_t>(best_lag) + 1];
      const double denom = l - 2.0 * c + r;
      if (std::abs(denom) > 1e-12) refined += 0.5 * (l - r) / denom;
    }
    (*pitch)[static_cast<size_t>(t)] = clip.sample_rate / refined;
    (*voicing)[static_cast<size_t>(t)] = 1;
  }
}

std::vector<double> FrameEnergy(const AudioClip& clip, const FeatureConfig& cfg) {
  int window = 0, hop = 0;
  int64_t frames = 0;
  const std::vector<double> sig = PreparedSignal(clip, cfg, &window, &hop, &frames);
  std::vector<double> energy(static_cast<size_t>(frames));
  for (int64_t t = 0; t < frames; ++t) {
    double sq = 0.0;
    for (int i = 0; i < window; ++i) {
      const double s = sig[static_cast<size_t>(t * hop + i)];
      sq += s * s;
    }
    energy[static_cast<size_t>(t)] = std::sqrt(sq / window);
  }
  return energy;
}

AcousticFrameSequence ExtractFeatures(const AudioClip& clip,
                                      const FeatureConfig& cfg) {
  AcousticFrameSequence f;
  f.mel = MelSpectrogram(clip, cfg);
  ExtractPitch(clip, cfg, &f.pitch, &f.voicing);
  f.energy = FrameEnergy(clip, cfg);
  f.Validate();
  return f;
}

std::vector<double> PhonemeAverage(const std::vector<double>& values,
                                   const std::vector<int>& durations) {
  int64_t total = 0;
  for (int d : durations) {
    TTSAUG_CHECK(d >= 1, AlignmentError, "phoneme duration below 1 frame");
    total += d;
  }
  TTSAUG_CHECK(total == static_cast<int64_t>(values.size()), AlignmentError,
               "duration sum " + std::to_string(total) + " != frame count " +
                   std::to_string(values.size()));
  std::vector<double> out(durations.size());
  size_t at = 0;
  for (size_t k = 0; k < durations.size(); ++k) {
    double s = 0.0;
    for (int i = 0; i < durations[k]; ++i) s += values[at++];
    out[k] = s / durations[k];
  }
  return out;
}

std::vector<double> PhonemeAveragePitch(const std::vector<double>& pitch,
                                        const std::vector<uint8_t>& voicing,
                                        const std::vector<int>& durations) {
  TTSAUG_CHECK(pitch.size() == voicing.size(), AlignmentError,
               "pitch/voicing length mismatch");
  int64_t total = 0;
  for (int d : durations) {
    TTSAUG_CHECK(d >= 1, AlignmentError, "phoneme duration below 1 frame");
    total += d;
  }
  TTSAUG_CHECK(total == static_cast<int64_t>(pitch.size()), AlignmentError,
               "duration sum != frame count");
  std::vector<double> out(durations.size(), 0.0);
  size_t at = 0;
  for (size_t k = 0; k < durations.size(); ++k) {
    double s = 0.0;
    int n = 0;
    for (int i = 0; i < durations[k]; ++i, ++at) {
      if (voicing[at]) {
        s += pitch[at];
        ++n;
      }
    }
    out[k] = n > 0 ? s / n : 0.0;
  }
  return out;
}

Tensor PhonemeAverageRows(const Tensor& values, const std::vector<int>& durations) {
  TTSAUG_CHECK(values.ndim() == 2, ShapeError, "PhonemeAverageRows expects 2-D");
  int64_t total = 0;
  for (int d : durations) {
    TTSAUG_CHECK(d >= 1, AlignmentError, "phoneme duration below 1 frame");
    total += d;
  }
  TTSAUG_CHECK(total == values.dim(0), AlignmentError,
               "duration sum != frame count");
  Tensor out({static_cast<int64_t>(durations.size()), values.dim(1)});
  int64_t at = 0;
  for (size_t k = 0; k < durations.size(); ++k) {
    for (int i = 0; i < durations[k]; ++i, ++at)
      for (int64_t d = 0; d < values.dim(1); ++d)
        out.at(static_cast<int64_t>(k), d) += values.at(at, d);
    for (int64_t d = 0; d < values.dim(1); ++d)
      out.at(static_cast<int64_t>(k), d) /= durations[k];
  }
  return out;
}

NormStats NormStats::Fit(const std::vector<const Tensor*>& mats, double floor) {
  TTSAUG_CHECK(!mats.empty() && !mats[0]->empty(), DataError,
               "NormStats::Fit on empty data");
  const int64_t D = mats[0]->dim(1);
  NormStats st;
  st.mean.assign(static_cast<size_t>(D), 0.0);
  st.stddev.assign(static_cast<size_t>(D), 0.0);
  int64_t n = 0;
  for (const Tensor* m : mats) {
    TTSAUG_CHECK(m->ndim() == 2 && m->dim(1) == D, ShapeError,
                 "NormStats::Fit dimension mismatch");
    for (int64_t t = 0; t < m->dim(0); ++t)
      for (int64_t d = 0; d < D; ++d) st.mean[static_cast<size_t>(d)] += m->at(t, d);
    n += m->dim(0);
  }
  TTSAUG_CHECK(n > 0, DataError, "NormStats::Fit with zero rows");
  for (auto& v : st.mean) v /= static_cast<double>(n);
  for (const Tensor* m : mats) {
    for (int64_t t = 0; t < m->dim(0); ++t)
      for (int64_t d = 0; d < D; ++d) {
        const double c = m->at(t, d) - st.mean[static_cast<size_t>(d)];
        st.stddev[static_cast<size_t>(d)] += c * c;
      }
  }
  for (auto& v : st.stddev) v = std::max(std::sqrt(v / static_cast<double>(n)), floor);
  return st;
}

Tensor NormStats::Apply(const Tensor& x) const {
  TTSAUG_CHECK(x.ndim() == 2 && x.dim(1) == static_cast<int64_t>(mean.size()),
               ShapeError, "NormStats::Apply dimension mismatch");
  Tensor y(x.shape());
  for (int64_t t = 0; t < x.dim(0); ++t)
    for (int64_t d = 0; d < x.dim(1); ++d)
      y.at(t, d) = (x.at(t, d) - mean[static_cast<size_t>(d)]) /
                   stddev[static_cast<size_t>(d)];
  return y;
}

Tensor NormStats::Invert(const Tensor& x) const {
  TTSAUG_CHECK(x.ndim() == 2 && x.dim(1) == static_cast<int64_t>(mean.size()),
               ShapeError, "NormStats::Invert dimension mismatch");
  Tensor y(x.shape());
  for (int64_t t = 0; t < x.dim(0); ++t)
    for (int64_t d = 0; d < x.dim(1); ++d)
      y.at(t, d) = x.at(t, d) * stddev[static_cast<size_t>(d)] +
                   mean[static_cast<size_t>(d)];
  return y;
}

double NormStats::ApplyScalar(double v, size_t dim) const {
  return (v - mean[dim]) / stddev[dim];
}

double NormStats::InvertScalar(double v, size_t dim) const {
  return v * stddev[dim] + mean[dim];
}

PitchNormalizer PitchNormalizer::Fit(const std::vector<double>& voiced_hz,
                                     double floor) {
  PitchNormalizer pn;
  if (voiced_hz.empty()) return pn;  // defaults; nothing voiced in training set
  double mean = 0.0;
  for (double hz : voiced_hz) {
    TTSAUG_CHECK(hz > 0.0, DataError, "voiced pitch must be positive");
    mean += std::log(hz);
  }
  mean /= static_cast<double>(voiced_hz.size());
  double var = 0.0;
  for (double hz : voiced_hz) {
    const double c = std::log(hz) - mean;
    var += c * c;
  }
  pn.mean = mean;
  pn.stddev = std::max(std::sqrt(var / static_cast<double>(voiced_hz.size())), floor);
  return pn;
}

double PitchNormalizer::Apply(double hz) const {
  if (hz <= 0.0) return 0.0;
  return (std::log(hz) - mean) / stddev;
}

double PitchNormalizer::Invert(double v) const {
  if (v == 0.0) return 0.0;
  return std::exp(v * stddev + mean);
}

void FeatureNormalizer::Save(const std::string& path) const {
  std::ostringstream out;
  out.precision(17);
  auto dump = [&out](const char* key, const std::vector<double>& v) {
    out << key;
    for (double x : v) out << ' ' << x;
    out << '\n';
  };
  dump("mel_mean", mel.mean);
  dump("mel_std", mel.stddev);
  out << "pitch_mean " << pitch.mean << '\n';
  out << "pitch_std " << pitch.stddev << '\n';
  dump("energy_mean", energy.mean);
  dump("energy_std", energy.stddev);
  AtomicWriteFile(path, out.str());
}

FeatureNormalizer FeatureNormalizer::Load(const std::string& path) {
  FeatureNormalizer fn;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (key == "mel_mean") fn.mel.mean = vals;
    else if (key == "mel_std") fn.mel.stddev = vals;
    else if (key == "pitch_mean") fn.pitch.mean = vals.at(0);
    else if (key == "pitch_std") fn.pitch.stddev = vals.at(0);
    else if (key == "energy_mean") fn.energy.mean = vals;
    else if (key == "energy_std") fn.energy.stddev = vals;
    else throw DataError("unknown normalizer key: " + key);
  }
  TTSAUG_CHECK(!fn.mel.mean.empty() && fn.mel.mean.size() == fn.mel.stddev.size(),
               IntegrityError, "normalizer file incomplete: " + path);
  return fn;
}

FeatureNormalizer FitFeatureNormalizer(
    const std::vector<const AcousticFrameSequence*>& train_set) {
  TTSAUG_CHECK(!train_set.empty(), DataError, "empty training set");
  std::vector<const Tensor*> mels;
  std::vector<double> voiced;
  std::vector<Tensor> energies;
  for (const auto* f : train_set) {
    mels.push_back(&f->mel);
    Tensor e({f->frames(), 1});
    for (int64_t t = 0; t < f->frames(); ++t) {
      e.at(t, 0) = f->energy[static_cast<size_t>(t)];
      if (f->voicing[static_cast<size_t>(t)])
        voiced.push_back(f->pitch[static_cast<size_t>(t)]);
    }
    energies.push_back(std::move(e));
  }
  std::vector<const Tensor*> energy_ptrs;
  for (const auto& e : energies) energy_ptrs.push_back(&e);
  FeatureNormalizer fn;
  fn.mel = NormStats::Fit(mels);
  fn.pitch = PitchNormalizer::Fit(voiced);
  fn.energy = NormStats::Fit(energy_ptrs);
  return fn;
}

Tensor PackAcousticFrames(const AcousticFrameSequence& f,
                          const FeatureNormalizer& norm) {
  f.Validate();
  const int64_t T = f.frames();
  const int64_t M = f.mel.dim(1);
  Tensor out({T, M + 3});
  const Tensor mel_n = norm.mel.Apply(f.mel);
  for (int64_t t = 0; t < T; ++t) {
    for (int64_t m = 0; m < M; ++m) out.at(t, m) = mel_n.at(t, m);
    out.at(t, M) = norm.pitch.Apply(f.pitch[static_cast<size_t>(t)]);
    out.at(t, M + 1) = norm.energy.ApplyScalar(f.energy[static_cast<size_t>(t)]);
    out.at(t, M + 2) = f.voicing[static_cast<size_t>(t)] ? 1.0 : 0.0;
  }
  return out;
}

AcousticFrameSequence UnpackAcousticFrames(const Tensor& packed,
                                           const FeatureNormalizer& norm,
                                           double voicing_threshold) {
  TTSAUG_CHECK(packed.ndim() == 2, ShapeError, "UnpackAcousticFrames expects 2-D");
  const int64_t M = static_cast<int64_t>(norm.mel.mean.size());
  TTSAUG_CHECK(packed.dim(1) == M + 3, ShapeError,
               "packed feature dim does not match normalizer");
  const int64_t T = packed.dim(0);
  AcousticFrameSequence f;
  Tensor mel_n({T, M});
  f.pitch.resize(static_cast<size_t>(T));
  f.energy.resize(static_cast<size_t>(T));
  f.voicing.resize(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    for (int64_t m = 0; m < M; ++m) mel_n.at(t, m) = packed.at(t, m);
    const bool voiced = packed.at(t, M + 2) > voicing_threshold;
    f.voicing[static_cast<size_t>(t)] = voiced ? 1 : 0;
    f.pitch[static_cast<size_t>(t)] =
        voiced ? std::max(norm.pitch.Invert(packed.at(t, M)), 1e-3) : 0.0;
    f.energy[static_cast<size_t>(t)] =
        std::max(norm.energy.InvertScalar(packed.at(t, M + 1)), 0.0);
  }
  f.mel = norm.mel.Invert(mel_n);
  f.Validate();
  return f;
}

void SaveFeatureCache(const std::string& path, const AcousticFrameSequence& f) {
  f.Validate();
  const int64_t T = f.frames();
  const int64_t M = f.mel.dim(1);
  std::string buf;
  buf.append("TTSF", 4);
  const auto put_u32 = [&buf](uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    buf.append(b, 4);
  };
  put_u32(static_cast<uint32_t>(T));
  put_u32(static_cast<uint32_t>(M + 3));
  for (int64_t t = 0; t < T; ++t) {
    std::vector<float> row(static_cast<size_t>(M + 3));
    for (int64_t m = 0; m < M; ++m) row[static_cast<size_t>(m)] = static_cast<float>(f.mel.at(t, m));
    row[static_cast<size_t>(M)] = static_cast<float>(f.pitch[static_cast<size_t>(t)]);
    row[static_cast<size_t>(M + 1)] = static_cast<float>(f.energy[static_cast<size_t>(t)]);
    row[static_cast<size_t>(M + 2)] = f.voicing[static_cast<size_t>(t)] ? 1.0f : 0.0f;
    buf.append(reinterpret_cast<const char*>(row.data()), row.size() * 4);
  }
  AtomicWriteFile(path, buf);
}

AcousticFrameSequence LoadFeatureCache(const std::string& path) {
  const std::string buf = ReadTextFile(path);
  TTSAUG_CHECK(buf.size() >= 12 && buf.compare(0, 4, "TTSF") == 0, IntegrityError,
               "not a feature cache file: " + path);
  uint32_t T = 0, dim = 0;
  std::memcpy(&T, buf.data() + 4, 4);
  std::memcpy(&dim, buf.data() + 8, 4);
  TTSAUG_CHECK(dim >= 4, IntegrityError, "feature cache dim too small");
  const size_t expected = 12 + static_cast<size_t>(T) * dim * 4;
  TTSAUG_CHECK(buf.size() == expected, IntegrityError,
               "feature cache truncated: " + path);
  const int64_t M = static_cast<int64_t>(dim) - 3;
  AcousticFrameSequence f;
  f.mel = Tensor({static_cast<int64_t>(T), M});
  f.pitch.resize(T);
  f.energy.resize(T);
  f.voicing.resize(T);
  const char* p = buf.data() + 12;
  for (uint32_t t = 0; t < T; ++t) {
    std::vector<float> row(dim);
    std::memcpy(row.data(), p, static_cast<size_t>(dim) * 4);
    p += dim * 4;
    for (int64_t m = 0; m < M; ++m) f.mel.at(t, m) = row[static_cast<size_t>(m)];
    f.pitch[t] = row[static_cast<size_t>(M)];
    f.energy[t] = row[static_cast<size_t>(M + 1)];
    f.voicing[t] = row[static_cast<size_t>(M + 2)] > 0.5f ? 1 : 0;
  }
  f.Validate();
  return f;
}

}  // namespace ttsaug

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

#include "ttsaug/lpwavenet.h"

#include <algorithm>
#include <cmath>

namespace ttsaug {

void LpWaveNetConfig::Validate() const {
  stack.Validate();
  lpc.Validate();
  TTSAUG_CHECK(stack.causal, ConfigError, "LP vocoder stack must be causal");
  TTSAUG_CHECK(stack.out_params == 2, ConfigError,
               "LP vocoder needs mean and log-scale outputs");
  TTSAUG_CHECK(stack.in_channels == 1, ConfigError, "LP vocoder input is scalar");
  TTSAUG_CHECK(scale_reduction_voiced > 0.0 && scale_reduction_voiced <= 1.0,
               ConfigError, "voiced scale reduction must lie in (0, 1]");
  TTSAUG_CHECK(stack.cond_channels >= 1, ConfigError,
               "LP vocoder needs conditioning channels");
}

LpWaveNetVocoder::LpWaveNetVocoder(const LpWaveNetConfig& cfg, int64_t feature_dim,
                                   const Tensor& mel_filterbank, int nfft,
                                   int hop_samples, uint64_t seed)
    : cfg_(cfg),
      hop_samples_(hop_samples),
      analyzer_(mel_filterbank, nfft, cfg.lpc) {
  cfg.Validate();
  TTSAUG_CHECK(hop_samples >= 1, ConfigError, "hop must be >= 1");
  RngStream rng = MakeStream(seed, "lpwavenet_init");
  upsampler_ = ConditionUpsampler(feature_dim, cfg.stack.cond_channels,
                                  cfg.cond_kernel, hop_samples, &rng);
  stack_ = WaveNetStack(cfg.stack, &rng);
}

LpWaveNetVocoder::Analysis LpWaveNetVocoder::Analyze(
    const Tensor& cond_features, const Tensor& mel_physical,
    const std::vector<uint8_t>& voicing) const {
  TTSAUG_CHECK(cond_features.ndim() == 2 && mel_physical.ndim() == 2, ShapeError,
               "analysis inputs must be 2-D");
  const int64_t T = cond_features.dim(0);
  TTSAUG_CHECK(mel_physical.dim(0) == T &&
                   static_cast<int64_t>(voicing.size()) == T,
               AlignmentError, "analysis frame counts disagree");
  Analysis a;
  a.cond = cond_features;
  a.voicing = voicing;
  a.lpc.reserve(static_cast<size_t>(T));
  std::vector<double> frame(static_cast<size_t>(mel_physical.dim(1)));
  for (int64_t t = 0; t < T; ++t) {
    for (int64_t m = 0; m < mel_physical.dim(1); ++m)
      frame[static_cast<size_t>(m)] = mel_physical.at(t, m);
    LpcResult r = analyzer_.Analyze(frame);
    a.lpc_clamped = a.lpc_clamped || r.clamped;
    a.lpc.push_back(std::move(r.coeffs));
  }
  return a;
}

namespace {

// Linear-prediction mean per sample from ground-truth history.
Tensor LpMeans(const std::vector<double>& samples,
               const std::vector<std::vector<double>>& lpc, int hop) {
  const auto n = static_cast<int64_t>(samples.size());
  Tensor lp({n, 1});
  const int order = lpc.empty() ? 0 : static_cast<int>(lpc[0].size());
  for (int64_t t = 0; t < n; ++t) {
    const auto& coeffs = lpc[static_cast<size_t>(t / hop)];
    double s = 0.0;
    for (int i = 1; i <= order && t - i >= 0; ++i)
      s += coeffs[static_cast<size_t>(i - 1)] * samples[static_cast<size_t>(t - i)];
    lp.at(t, 0) = s;
  }
  return lp;
}

}  // namespace

Var LpWaveNetVocoder::Nll(const std::vector<double>& samples,
                          const Analysis& a) const {
  const int64_t T = a.cond.dim(0);
  const auto n = static_cast<int64_t>(samples.size());
  TTSAUG_CHECK(n == T * hop_samples_, ConfigError,
               "sample count does not match frames times hop");
  Var cond_up = upsampler_.Forward(Var::Const(a.cond));
  Tensor x_in({n, 1});
  Tensor x({n, 1});
  for (int64_t t = 0; t < n; ++t) {
    x.at(t, 0) = samples[static_cast<size_t>(t)];
    x_in.at(t, 0) = t > 0 ? samples[static_cast<size_t>(t - 1)] : 0.0;
  }
  Var out = stack_.Forward(Var::Const(std::move(x_in)), cond_up);
  Var mean = Add(SliceCols(out, 0, 1),
                 Var::Const(LpMeans(samples, a.lpc, hop_samples_)));
  Var log_scale = SliceCols(out, 1, 1);
  return GaussianNll(Var::Const(std::move(x)), mean, log_scale,
                     cfg_.log_scale_floor);
}

LpWaveNetVocoder::SynthesisResult LpWaveNetVocoder::Synthesize(
    const Analysis& a, RngStream* noise_rng) const {
  std::vector<const Analysis*> items = {&a};
  WaveNetFastInference fast(stack_, 1);
  const int64_t T = a.cond.dim(0);
  const int64_t n = T * hop_samples_;
  Tensor cond_up = upsampler_.Forward(Var::Const(a.cond)).value();
  const int order = analyzer_.order();
  SynthesisResult res;
  res.samples.assign(static_cast<size_t>(n), 0.0);
  res.scale_factors.assign(static_cast<size_t>(n), 1.0);
  std::vector<double> x_t(1, 0.0);
  Tensor cond_t({1, cfg_.stack.cond_channels});
  Tensor out({1, 2});
  std::vector<double> history(static_cast<size_t>(order), 0.0);
  for (int64_t t = 0; t < n; ++t) {
    const int64_t frame = t / hop_samples_;
    for (int64_t c = 0; c < cfg_.stack.cond_channels; ++c)
      cond_t.at(0, c) = cond_up.at(t, c);
    fast.Step(x_t, cond_t, &out);
    const double lp = LpPrediction(history.data(), a.lpc[static_cast<size_t>(frame)]);
    const double mean = lp + out.at(0, 0);
    const double log_scale = std::max(out.at(0, 1), cfg_.log_scale_floor);
    const double factor = a.voicing[static_cast<size_t>(frame)]
                              ? cfg_.scale_reduction_voiced
                              : 1.0;
    const double sample = std::clamp(
        mean + std::exp(log_scale) * factor * noise_rng->Gaussian(), -1.5, 1.5);
    res.samples[static_cast<size_t>(t)] = sample;
    res.scale_factors[static_cast<size_t>(t)] = factor;
    for (int i = order - 1; i > 0; --i)
      history[static_cast<size_t>(i)] = history[static_cast<size_t>(i - 1)];
    if (order > 0) history[0] = sample;
    x_t[0] = sample;
  }
  return res;
}

std::vector<std::vector<double>> LpWaveNetVocoder::SynthesizeBatch(
    const std::vector<const Analysis*>& items,
    const std::vector<uint64_t>& noise_seeds) const {
  TTSAUG_CHECK(items.size() == noise_seeds.size(), ShapeError,
               "one noise seed per item");
  const int B = static_cast<int>(items.size());
  if (B == 0) return {};
  std::vector<RngStream> rngs;
  rngs.reserve(items.size());
  for (uint64_t s : noise_seeds) rngs.emplace_back(s);

  int64_t max_n = 0;
  std::vector<Tensor> cond_up(items.size());
  std::vector<int64_t> lengths(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    cond_up[i] = upsampler_.Forward(Var::Const(items[i]->cond)).value();
    lengths[i] = items[i]->cond.dim(0) * hop_samples_;
    max_n = std::max(max_n, lengths[i]);
  }

  WaveNetFastInference fast(stack_, B);
  const int order = analyzer_.order();
  std::vector<std::vector<double>> out_samples(items.size());
  for (size_t i = 0; i < items.size(); ++i)
    out_samples[i].assign(static_cast<size_t>(lengths[i]), 0.0);
  std::vector<std::vector<double>> history(
      items.size(), std::vector<double>(static_cast<size_t>(order), 0.0));
  std::vector<double> x_t(static_cast<size_t>(B), 0.0);
  Tensor cond_t({B, cfg_.stack.cond_channels});
  Tensor out({B, 2});
  for (int64_t t = 0; t < max_n; ++t) {
    for (int b = 0; b < B; ++b) {
      if (t < lengths[static_cast<size_t>(b)]) {
        for (int64_t c = 0; c < cfg_.stack.cond_channels; ++c)
          cond_t.at(b, c) = cond_up[static_cast<size_t>(b)].at(t, c);
      } else {
        for (int64_t c = 0; c < cfg_.stack.cond_channels; ++c) cond_t.at(b, c) = 0.0;
      }
    }
    fast.Step(x_t, cond_t, &out);
    for (int b = 0; b < B; ++b) {
      const auto bi = static_cast<size_t>(b);
      if (t >= lengths[bi]) {
        x_t[bi] = 0.0;
        continue;
      }
      const Analysis& a = *items[bi];
      const int64_t frame = t / hop_samples_;
      const double lp = LpPrediction(history[bi].data(), a.lpc[static_cast<size_t>(frame)]);
      const double mean = lp + out.at(b, 0);
      const double log_scale = std::max(out.at(b, 1), cfg_.log_scale_floor);
      const double factor =
          a.voicing[static_cast<size_t>(frame)] ? cfg_.scale_reduction_voiced : 1.0;
      const double sample = std::clamp(
          mean + std::exp(log_scale) * factor * rngs[bi].Gaussian(), -1.5, 1.5);
      out_samples[bi][static_cast<size_t>(t)] = sample;
      for (int i = order - 1; i > 0; --i)
        history[bi][static_cast<size_t>(i)] = history[bi][static_cast<size_t>(i - 1)];
      if (order > 0) history[bi][0] = sample;
      x_t[bi] = sample;
    }
  }
  return out_samples;
}

void LpWaveNetVocoder::CollectParams(std::vector<NamedParam>* out) {
  upsampler_.CollectParams("lpw.cond", out);
  stack_.CollectParams("lpw.stack", out);
}

}  // namespace ttsaug

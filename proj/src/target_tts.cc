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

#include "ttsaug/target_tts.h"

#include <algorithm>
#include <cmath>

#include "ttsaug/duration_model.h"

namespace ttsaug {

void TargetModelConfig::Validate() const {
  TTSAUG_CHECK(vocab >= 1 && embed_dim >= 1 && encoder_blocks >= 1 &&
                   decoder_blocks >= 1 && attn_hidden >= 1 && attn_heads >= 1 &&
                   conv_filter >= 1 && var_predictor_blocks >= 1 &&
                   var_predictor_dim >= 1 && mel_dim >= 1 && postnet_layers >= 2 &&
                   pitch_bins >= 2 && energy_bins >= 2,
               ConfigError, "target model sizes must be positive");
  TTSAUG_CHECK(attn_hidden % attn_heads == 0, ConfigError,
               "attn_hidden must be divisible by attn_heads");
  TTSAUG_CHECK(fft_dropout >= 0.0 && fft_dropout < 1.0 &&
                   var_predictor_dropout >= 0.0 && var_predictor_dropout < 1.0,
               ConfigError, "dropout must lie in [0,1)");
}

std::vector<double> VarianceTargets::LogDurations() const {
  std::vector<double> out(durations.size());
  for (size_t i = 0; i < durations.size(); ++i) {
    TTSAUG_CHECK(durations[i] >= 1, AlignmentError, "duration below 1 frame");
    out[i] = std::log(static_cast<double>(durations[i]));
  }
  return out;
}

void VarianceTargets::Validate(size_t phoneme_count) const {
  TTSAUG_CHECK(durations.size() == phoneme_count && pitch.size() == phoneme_count &&
                   energy.size() == phoneme_count,
               AlignmentError, "variance target lengths != phoneme count");
  for (int d : durations)
    TTSAUG_CHECK(d >= 1, AlignmentError, "duration below 1 frame");
  for (double v : pitch)
    TTSAUG_CHECK(std::isfinite(v), DataError, "non-finite pitch target");
  for (double v : energy)
    TTSAUG_CHECK(std::isfinite(v), DataError, "non-finite energy target");
}

FftBlock::FftBlock(const TargetModelConfig& cfg, RngStream* rng)
    : attn_(cfg.attn_hidden, cfg.attn_heads, rng),
      ln1_(cfg.attn_hidden),
      ln2_(cfg.attn_hidden),
      conv1_(cfg.attn_hidden, cfg.conv_filter, cfg.conv_kernel1, 1, PadMode::kSame,
             rng),
      conv2_(cfg.conv_filter, cfg.attn_hidden, cfg.conv_kernel2, 1, PadMode::kSame,
             rng),
      dropout_(cfg.fft_dropout) {}

Var FftBlock::Forward(const Var& x, const std::vector<uint8_t>* mask,
                      RngStream* rng, bool train) const {
  Var h = mask ? ZeroRows(x, *mask) : x;
  Var a = attn_.Forward(h, mask);
  a = Dropout(a, dropout_, rng, train);
  h = ln1_.Forward(Add(h, a));
  if (mask) h = ZeroRows(h, *mask);
  Var c = conv2_.Forward(Relu(conv1_.Forward(h)));
  c = Dropout(c, dropout_, rng, train);
  h = ln2_.Forward(Add(h, c));
  if (mask) h = ZeroRows(h, *mask);
  return h;
}

void FftBlock::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  attn_.Collect(prefix + ".attn", out);
  ln1_.Collect(prefix + ".ln1", out);
  ln2_.Collect(prefix + ".ln2", out);
  conv1_.Collect(prefix + ".conv1", out);
  conv2_.Collect(prefix + ".conv2", out);
}

VariancePredictor::VariancePredictor(int64_t in_dim, const TargetModelConfig& cfg,
                                     RngStream* rng)
    : dropout_(cfg.var_predictor_dropout) {
  int64_t ch = in_dim;
  for (int i = 0; i < cfg.var_predictor_blocks; ++i) {
    convs_.emplace_back(ch, cfg.var_predictor_dim, cfg.var_predictor_kernel, 1,
                        PadMode::kSame, rng);
    norms_.emplace_back(cfg.var_predictor_dim);
    ch = cfg.var_predictor_dim;
  }
  out_ = Linear(ch, 1, rng);
}

Var VariancePredictor::Forward(const Var& x, RngStream* rng, bool train) const {
  Var h = x;
  for (size_t i = 0; i < convs_.size(); ++i) {
    h = norms_[i].Forward(Relu(convs_[i].Forward(h)));
    h = Dropout(h, dropout_, rng, train);
  }
  return out_.Forward(h);
}

void VariancePredictor::Collect(const std::string& prefix,
                                std::vector<NamedParam>* out) {
  for (size_t i = 0; i < convs_.size(); ++i) {
    convs_[i].Collect(prefix + ".conv" + std::to_string(i), out);
    norms_[i].Collect(prefix + ".norm" + std::to_string(i), out);
  }
  out_.Collect(prefix + ".out", out);
}

NarAcousticModel::NarAcousticModel(const TargetModelConfig& cfg, uint64_t seed)
    : cfg_(cfg) {
  cfg.Validate();
  RngStream rng = MakeStream(seed, "target_model_init");
  embed_ = Embedding(cfg.vocab, cfg.embed_dim, &rng);
  input_proj_ = Linear(cfg.embed_dim, cfg.attn_hidden, &rng);
  for (int i = 0; i < cfg.encoder_blocks; ++i) encoder_.emplace_back(cfg, &rng);
  dur_pred_ = VariancePredictor(cfg.attn_hidden, cfg, &rng);
  pitch_pred_ = VariancePredictor(cfg.attn_hidden, cfg, &rng);
  energy_pred_ = VariancePredictor(cfg.attn_hidden, cfg, &rng);
  pitch_embed_ = Embedding(cfg.pitch_bins, cfg.attn_hidden, &rng);
  energy_embed_ = Embedding(cfg.energy_bins, cfg.attn_hidden, &rng);
  for (int i = 0; i < cfg.decoder_blocks; ++i) decoder_.emplace_back(cfg, &rng);
  mel_proj_ = Linear(cfg.attn_hidden, cfg.mel_dim, &rng);
  int64_t pch = cfg.mel_dim;
  for (int i = 0; i < cfg.postnet_layers; ++i) {
    const bool last = i == cfg.postnet_layers - 1;
    postnet_.emplace_back(pch, last ? cfg.mel_dim : cfg.postnet_channels,
                          cfg.postnet_kernel, 1, PadMode::kSame, &rng);
    pch = last ? cfg.mel_dim : cfg.postnet_channels;
  }
  pos_cache_ = Var::Const(SinusoidalPositions(2048, cfg.attn_hidden));
}

Var NarAcousticModel::PositionalSlice(int64_t length) const {
  TTSAUG_CHECK(length <= pos_cache_.value().dim(0), ShapeError,
               "sequence longer than the positional table");
  return SliceRows(pos_cache_, 0, length);
}

std::vector<int> NarAcousticModel::QuantizeToBins(const std::vector<double>& v,
                                                  double lo, double hi,
                                                  int bins) const {
  std::vector<int> out(v.size());
  const double span = std::max(hi - lo, 1e-9);
  for (size_t i = 0; i < v.size(); ++i) {
    const int b = static_cast<int>((v[i] - lo) / span * bins);
    out[i] = std::clamp(b, 0, bins - 1);
  }
  return out;
}

NarAcousticModel::Output NarAcousticModel::Forward(
    const std::vector<int>& phonemes, const VarianceTargets* targets, Mode mode,
    RngStream* rng, const std::vector<int>* forced_durations) const {
  TTSAUG_CHECK(!phonemes.empty(), ShapeError, "empty phoneme sequence");
  if (mode == Mode::kTrain) {
    TTSAUG_CHECK(targets != nullptr, ConfigError,
                 "train mode requires variance targets");
    targets->Validate(phonemes.size());
  }
  const bool train = mode == Mode::kTrain;
  const auto P = static_cast<int64_t>(phonemes.size());

  Var h = input_proj_.Forward(embed_.Forward(phonemes));
  if (cfg_.use_positional_encoding) h = Add(h, PositionalSlice(P));
  for (const auto& block : encoder_) h = block.Forward(h, nullptr, rng, train);

  Output out;
  out.encoded = h;
  out.duration_pred = dur_pred_.Forward(h, rng, train);
  out.pitch_pred = pitch_pred_.Forward(h, rng, train);
  out.energy_pred = energy_pred_.Forward(h, rng, train);

  // Teacher values in training, own predictions at inference.
  std::vector<double> pitch_vals(phonemes.size()), energy_vals(phonemes.size());
  if (train) {
    pitch_vals = targets->pitch;
    energy_vals = targets->energy;
  } else {
    for (size_t i = 0; i < phonemes.size(); ++i) {
      pitch_vals[i] = out.pitch_pred.value().at(static_cast<int64_t>(i), 0);
      energy_vals[i] = out.energy_pred.value().at(static_cast<int64_t>(i), 0);
    }
  }
  const std::vector<int> pitch_ids =
      QuantizeToBins(pitch_vals, ranges_.pitch_min, ranges_.pitch_max, cfg_.pitch_bins);
  const std::vector<int> energy_ids = QuantizeToBins(
      energy_vals, ranges_.energy_min, ranges_.energy_max, cfg_.energy_bins);
  h = Add(h, Add(pitch_embed_.Forward(pitch_ids), energy_embed_.Forward(energy_ids)));

  if (train) {
    out.used_durations = targets->durations;
  } else if (forced_durations) {
    TTSAUG_CHECK(forced_durations->size() == phonemes.size(), AlignmentError,
                 "forced duration length mismatch");
    out.used_durations = *forced_durations;
  } else {
    std::vector<double> pred(phonemes.size());
    for (size_t i = 0; i < phonemes.size(); ++i)
      pred[i] = std::exp(out.duration_pred.value().at(static_cast<int64_t>(i), 0));
    out.used_durations = QuantizeDurations(pred);
  }

  Var x = RepeatRows(h, out.used_durations);
  out.expanded = x;
  const int64_t T = x.value().dim(0);
  if (cfg_.use_positional_encoding) x = Add(x, PositionalSlice(T));
  for (const auto& block : decoder_) x = block.Forward(x, nullptr, rng, train);

  out.mel_pre = mel_proj_.Forward(x);
  Var r = out.mel_pre;
  for (size_t i = 0; i < postnet_.size(); ++i) {
    r = postnet_[i].Forward(r);
    if (i + 1 < postnet_.size()) r = Tanh(r);
  }
  out.mel_post = Add(out.mel_pre, r);
  return out;
}

NarAcousticModel::LossOut NarAcousticModel::Loss(const std::vector<int>& phonemes,
                                                 const VarianceTargets& targets,
                                                 const Tensor& mel_target,
                                                 RngStream* rng, bool train) const {
  Output o = Forward(phonemes, &targets, Mode::kTrain, rng);
  TTSAUG_CHECK(mel_target.dim(0) == o.mel_pre.value().dim(0), AlignmentError,
               "mel target frames != duration sum");
  Var mel_tgt = Var::Const(mel_target);
  Var l1_pre = L1Loss(o.mel_pre, mel_tgt);
  Var l1_post = L1Loss(o.mel_post, mel_tgt);

  const auto P = static_cast<int64_t>(phonemes.size());
  Tensor dur_t({P, 1}), pitch_t({P, 1}), energy_t({P, 1});
  const std::vector<double> log_dur = targets.LogDurations();
  for (int64_t p = 0; p < P; ++p) {
    dur_t.at(p, 0) = log_dur[static_cast<size_t>(p)];
    pitch_t.at(p, 0) = targets.pitch[static_cast<size_t>(p)];
    energy_t.at(p, 0) = targets.energy[static_cast<size_t>(p)];
  }
  Var dur_mse = MseLoss(o.duration_pred, Var::Const(std::move(dur_t)));
  Var pitch_mse = MseLoss(o.pitch_pred, Var::Const(std::move(pitch_t)));
  Var energy_mse = MseLoss(o.energy_pred, Var::Const(std::move(energy_t)));

  LossOut lo;
  lo.total = Add(Add(Add(l1_pre, l1_post), Add(dur_mse, pitch_mse)), energy_mse);
  lo.mel_l1_pre = l1_pre.item();
  lo.mel_l1_post = l1_post.item();
  lo.duration_mse = dur_mse.item();
  lo.pitch_mse = pitch_mse.item();
  lo.energy_mse = energy_mse.item();
  if (!train) lo.total = Detach(lo.total);
  return lo;
}

void NarAcousticModel::CollectParams(std::vector<NamedParam>* out) {
  embed_.Collect("tgt.embed", out);
  input_proj_.Collect("tgt.inproj", out);
  for (size_t i = 0; i < encoder_.size(); ++i)
    encoder_[i].Collect("tgt.enc" + std::to_string(i), out);
  dur_pred_.Collect("tgt.dur", out);
  pitch_pred_.Collect("tgt.pitch", out);
  energy_pred_.Collect("tgt.energy", out);
  pitch_embed_.Collect("tgt.pitch_embed", out);
  energy_embed_.Collect("tgt.energy_embed", out);
  for (size_t i = 0; i < decoder_.size(); ++i)
    decoder_[i].Collect("tgt.dec" + std::to_string(i), out);
  mel_proj_.Collect("tgt.melproj", out);
  for (size_t i = 0; i < postnet_.size(); ++i)
    postnet_[i].Collect("tgt.postnet" + std::to_string(i), out);
}

}  // namespace ttsaug

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

#include "ttsaug/source_tts.h"

#include <cmath>

namespace ttsaug {

void SourceModelConfig::Validate() const {
  TTSAUG_CHECK(embed_dim >= 1 && encoder_conv_layers >= 1 &&
                   encoder_conv_kernel >= 1 && encoder_conv_channels >= 1 &&
                   encoder_birnn_units >= 1 && encoder_fc_units >= 1 &&
                   decoder_rnn_layers >= 1 && decoder_rnn_units >= 1 &&
                   projection_dim >= 1 && postnet_layers >= 2 &&
                   postnet_kernel >= 1 && postnet_channels >= 1,
               ConfigError, "source model sizes must be positive");
  TTSAUG_CHECK(!prenet_units.empty(), ConfigError, "source model needs a PreNet");
  TTSAUG_CHECK(prenet_dropout >= 0.0 && prenet_dropout < 1.0, ConfigError,
               "prenet dropout in [0,1)");
}

ArAcousticModel::ArAcousticModel(int vocab, const SourceModelConfig& cfg,
                                 uint64_t seed)
    : cfg_(cfg), vocab_(vocab) {
  cfg.Validate();
  RngStream rng = MakeStream(seed, "source_model_init");
  embed_ = Embedding(vocab, cfg.embed_dim, &rng);
  int64_t ch = cfg.embed_dim + 1;
  for (int i = 0; i < cfg.encoder_conv_layers; ++i) {
    enc_convs_.emplace_back(ch, cfg.encoder_conv_channels, cfg.encoder_conv_kernel,
                            1, PadMode::kSame, &rng);
    enc_norms_.emplace_back(cfg.encoder_conv_channels);
    ch = cfg.encoder_conv_channels;
  }
  enc_fwd_ = LstmCell(ch, cfg.encoder_birnn_units, &rng);
  enc_bwd_ = LstmCell(ch, cfg.encoder_birnn_units, &rng);
  enc_fc_ = Linear(2 * cfg.encoder_birnn_units, cfg.encoder_fc_units, &rng);

  int64_t in = cfg.projection_dim;
  for (int64_t u : cfg.prenet_units) {
    prenet_.emplace_back(in, u, &rng);
    in = u;
  }
  int64_t dec_in = in + cfg.encoder_fc_units;
  for (int i = 0; i < cfg.decoder_rnn_layers; ++i) {
    dec_lstm_.emplace_back(dec_in, cfg.decoder_rnn_units, &rng);
    dec_in = cfg.decoder_rnn_units;
  }
  projection_ = Linear(cfg.decoder_rnn_units + cfg.encoder_fc_units,
                       cfg.projection_dim, &rng);

  int64_t pch = cfg.projection_dim;
  for (int i = 0; i < cfg.postnet_layers; ++i) {
    const bool last = i == cfg.postnet_layers - 1;
    postnet_.emplace_back(pch, last ? cfg.projection_dim : cfg.postnet_channels,
                          cfg.postnet_kernel, 1, PadMode::kSame, &rng);
    pch = last ? cfg.projection_dim : cfg.postnet_channels;
  }
}

Var ArAcousticModel::FrameInputs(const std::vector<int>& phonemes,
                                 const std::vector<int>& durations) const {
  TTSAUG_CHECK(!phonemes.empty(), ShapeError, "empty phoneme sequence");
  TTSAUG_CHECK(phonemes.size() == durations.size(), AlignmentError,
               "phoneme/duration length mismatch");
  Var emb = embed_.Forward(phonemes);
  Var frames = RepeatRows(emb, durations);
  // Intra-phoneme progress column 0..1.
  const int64_t total = frames.value().dim(0);
  Tensor pos({total, 1});
  int64_t at = 0;
  for (int d : durations) {
    for (int i = 0; i < d; ++i, ++at)
      pos.at(at, 0) = d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
  }
  return ConcatCols(frames, Var::Const(std::move(pos)));
}

Var ArAcousticModel::EncodeContext(const Var& frame_inputs) const {
  TTSAUG_CHECK(frame_inputs.value().ndim() == 2 && frame_inputs.value().dim(0) >= 1,
               ShapeError, "encoder input must be a non-empty frame matrix");
  Var h = frame_inputs;
  for (size_t i = 0; i < enc_convs_.size(); ++i)
    h = enc_norms_[i].Forward(Relu(enc_convs_[i].Forward(h)));
  Var fwd = enc_fwd_.Sequence(h, false);
  Var bwd = enc_bwd_.Sequence(h, true);
  return Relu(enc_fc_.Forward(ConcatCols(fwd, bwd)));
}

ArAcousticModel::DecoderState ArAcousticModel::ZeroState() const {
  DecoderState st;
  for (size_t i = 0; i < dec_lstm_.size(); ++i) {
    st.h.push_back(Var::Const(Tensor({1, cfg_.decoder_rnn_units})));
    st.c.push_back(Var::Const(Tensor({1, cfg_.decoder_rnn_units})));
  }
  return st;
}

Var ArAcousticModel::Prenet(const Var& x, RngStream* rng, bool enabled) const {
  Var h = x;
  for (const auto& fc : prenet_)
    h = Dropout(Relu(fc.Forward(h)), cfg_.prenet_dropout, rng, enabled);
  return h;
}

std::pair<Var, ArAcousticModel::DecoderState> ArAcousticModel::DecodeStep(
    const Var& prev_frame, const Var& context_frame, const DecoderState& state,
    RngStream* dropout_rng, bool dropout_enabled) const {
  TTSAUG_CHECK(state.h.size() == dec_lstm_.size() && state.c.size() == dec_lstm_.size(),
               ConfigError, "decoder state does not match configuration");
  TTSAUG_CHECK(prev_frame.value().cols() == cfg_.projection_dim, ShapeError,
               "previous frame dim mismatch");
  Var x = ConcatCols(Prenet(prev_frame, dropout_rng, dropout_enabled), context_frame);
  DecoderState next;
  next.h.resize(dec_lstm_.size());
  next.c.resize(dec_lstm_.size());
  for (size_t l = 0; l < dec_lstm_.size(); ++l) {
    auto [h, c] = dec_lstm_[l].Step(x, state.h[l], state.c[l]);
    next.h[l] = h;
    next.c[l] = c;
    x = h;
  }
  Var frame = projection_.Forward(ConcatCols(x, context_frame));
  return {frame, next};
}

Var ArAcousticModel::PostNet(const Var& frames) const {
  Var h = frames;
  for (size_t i = 0; i < postnet_.size(); ++i) {
    h = postnet_[i].Forward(h);
    if (i + 1 < postnet_.size()) h = Tanh(h);
  }
  return h;
}

std::pair<Var, Var> ArAcousticModel::TeacherForced(
    const std::vector<int>& phonemes, const std::vector<int>& durations,
    const Tensor& targets, RngStream* dropout_rng, bool dropout_enabled) const {
  Var context = EncodeContext(FrameInputs(phonemes, durations));
  const int64_t T = context.value().dim(0);
  TTSAUG_CHECK(targets.ndim() == 2 && targets.dim(0) == T, AlignmentError,
               "target frame count does not match duration sum");
  TTSAUG_CHECK(targets.dim(1) == cfg_.projection_dim, ShapeError,
               "target feature dim mismatch");
  Var tgt = Var::Const(targets);
  DecoderState st = ZeroState();
  Var prev = Var::Const(Tensor({1, cfg_.projection_dim}));  // go frame
  std::vector<Var> rows;
  rows.reserve(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    auto [frame, next] = DecodeStep(prev, Row(context, t), st, dropout_rng,
                                    dropout_enabled);
    rows.push_back(frame);
    st = next;
    prev = Row(tgt, t);
  }
  Var pre = StackRows(rows);
  Var post = Add(pre, PostNet(pre));
  return {pre, post};
}

Tensor ArAcousticModel::Generate(const std::vector<int>& phonemes,
                                 const std::vector<int>& durations,
                                 RngStream* dropout_rng,
                                 bool prenet_dropout) const {
  Var context = EncodeContext(FrameInputs(phonemes, durations));
  const int64_t T = context.value().dim(0);
  DecoderState st = ZeroState();
  Var prev = Var::Const(Tensor({1, cfg_.projection_dim}));
  std::vector<Var> rows;
  rows.reserve(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    auto [frame, next] = DecodeStep(prev, Row(context, t), st, dropout_rng,
                                    prenet_dropout);
    rows.push_back(frame);
    st = next;
    prev = Var::Const(frame.value());  // greedy feedback, no graph growth
  }
  Var pre = StackRows(rows);
  Var post = Add(pre, PostNet(pre));
  return post.value();
}

Var ArAcousticModel::Loss(const std::vector<int>& phonemes,
                          const std::vector<int>& durations, const Tensor& targets,
                          RngStream* dropout_rng, bool dropout_enabled) const {
  auto [pre, post] =
      TeacherForced(phonemes, durations, targets, dropout_rng, dropout_enabled);
  Var tgt = Var::Const(targets);
  return Add(L1Loss(pre, tgt), L1Loss(post, tgt));
}

void ArAcousticModel::CollectParams(std::vector<NamedParam>* out) {
  embed_.Collect("src.embed", out);
  for (size_t i = 0; i < enc_convs_.size(); ++i) {
    enc_convs_[i].Collect("src.enc.conv" + std::to_string(i), out);
    enc_norms_[i].Collect("src.enc.norm" + std::to_string(i), out);
  }
  enc_fwd_.Collect("src.enc.fwd", out);
  enc_bwd_.Collect("src.enc.bwd", out);
  enc_fc_.Collect("src.enc.fc", out);
  for (size_t i = 0; i < prenet_.size(); ++i)
    prenet_[i].Collect("src.prenet" + std::to_string(i), out);
  for (size_t i = 0; i < dec_lstm_.size(); ++i)
    dec_lstm_[i].Collect("src.dec.lstm" + std::to_string(i), out);
  projection_.Collect("src.proj", out);
  for (size_t i = 0; i < postnet_.size(); ++i)
    postnet_[i].Collect("src.postnet" + std::to_string(i), out);
}

}  // namespace ttsaug

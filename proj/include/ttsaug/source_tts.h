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

#ifndef TTSAUG_SOURCE_TTS_H_
#define TTSAUG_SOURCE_TTS_H_

#include <utility>
#include <vector>

#include "ttsaug/nn.h"

namespace ttsaug {

struct SourceModelConfig {
  int64_t embed_dim = 256;
  int encoder_conv_layers = 3;
  int encoder_conv_kernel = 10;
  int64_t encoder_conv_channels = 512;
  int64_t encoder_birnn_units = 512;  // per direction
  int64_t encoder_fc_units = 512;
  std::vector<int64_t> prenet_units = {256, 256};
  double prenet_dropout = 0.5;
  int decoder_rnn_layers = 2;
  int64_t decoder_rnn_units = 1024;
  int64_t projection_dim = 83;  // acoustic feature dim (mel + pitch/energy/voicing)
  int postnet_layers = 5;
  int postnet_kernel = 5;
  int64_t postnet_channels = 512;

  void Validate() const;
};

// Autoregressive acoustic model: duration-upsampled phoneme embeddings pass
// through a convolutional + BiLSTM context encoder; a PreNet/LSTM decoder
// emits one frame per context frame, so output length is fixed by the
// durations rather than attention.
class ArAcousticModel {
 public:
  ArAcousticModel(int vocab, const SourceModelConfig& cfg, uint64_t seed);

  const SourceModelConfig& config() const { return cfg_; }
  int vocab() const { return vocab_; }

  // [sum(durations), embed_dim + 1] embedding rows repeated per duration with
  // an intra-phoneme position column.
  Var FrameInputs(const std::vector<int>& phonemes,
                  const std::vector<int>& durations) const;

  // Frame-level inputs -> frame-level context features, length preserved.
  Var EncodeContext(const Var& frame_inputs) const;

  struct DecoderState {
    std::vector<Var> h;
    std::vector<Var> c;
  };
  DecoderState ZeroState() const;

  // One decoder step: previous output frame plus this step's context frame.
  std::pair<Var, DecoderState> DecodeStep(const Var& prev_frame,
                                          const Var& context_frame,
                                          const DecoderState& state,
                                          RngStream* dropout_rng,
                                          bool dropout_enabled) const;

  Var PostNet(const Var& frames) const;

  // Teacher-forced decode over targets. Returns (pre, post) frame matrices.
  std::pair<Var, Var> TeacherForced(const std::vector<int>& phonemes,
                                    const std::vector<int>& durations,
                                    const Tensor& targets,
                                    RngStream* dropout_rng,
                                    bool dropout_enabled) const;

  // Free-running synthesis; frame count equals sum(durations) always.
  Tensor Generate(const std::vector<int>& phonemes,
                  const std::vector<int>& durations, RngStream* dropout_rng,
                  bool prenet_dropout) const;

  // L1(pre, target) + L1(post, target).
  Var Loss(const std::vector<int>& phonemes, const std::vector<int>& durations,
           const Tensor& targets, RngStream* dropout_rng,
           bool dropout_enabled) const;

  void CollectParams(std::vector<NamedParam>* out);

 private:
  Var Prenet(const Var& x, RngStream* rng, bool enabled) const;

  SourceModelConfig cfg_;
  int vocab_ = 0;
  Embedding embed_;
  std::vector<Conv1dLayer> enc_convs_;
  std::vector<LayerNorm> enc_norms_;
  LstmCell enc_fwd_, enc_bwd_;
  Linear enc_fc_;
  std::vector<Linear> prenet_;
  std::vector<LstmCell> dec_lstm_;
  Linear projection_;
  std::vector<Conv1dLayer> postnet_;
};

}  // namespace ttsaug

#endif  // TTSAUG_SOURCE_TTS_H_

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

#include "ttsaug/wavenet.h"

#include <cmath>

namespace ttsaug {

std::vector<int> WaveNetStackConfig::Dilations() const {
  std::vector<int> d;
  for (int c = 0; c < cycles; ++c)
    d.insert(d.end(), dilation_cycle.begin(), dilation_cycle.end());
  return d;
}

void WaveNetStackConfig::Validate() const {
  TTSAUG_CHECK(!dilation_cycle.empty() && cycles >= 1, ConfigError,
               "empty dilation schedule");
  TTSAUG_CHECK(layers == static_cast<int>(dilation_cycle.size()) * cycles,
               ConfigError, "layers must equal cycle length times cycles");
  TTSAUG_CHECK(kernel >= 2, ConfigError, "kernel must be >= 2");
  TTSAUG_CHECK(residual_channels >= 1 && skip_channels >= 1 && in_channels >= 1 &&
                   out_params >= 1,
               ConfigError, "channel counts must be positive");
  for (int d : dilation_cycle)
    TTSAUG_CHECK(d >= 1, ConfigError, "dilations must be >= 1");
  if (!causal)
    TTSAUG_CHECK(kernel % 2 == 1, ConfigError,
                 "non-causal stack needs an odd kernel");
}

int64_t ReceptiveField(const WaveNetStackConfig& cfg) {
  cfg.Validate();
  int64_t sum_d = 0;
  for (int d : cfg.Dilations()) sum_d += d;
  const int64_t k = cfg.kernel;
  return cfg.causal ? (k - 1) * sum_d + k : (k - 1) * sum_d + 1;
}

WaveNetStack::WaveNetStack(const WaveNetStackConfig& cfg, RngStream* rng)
    : cfg_(cfg) {
  cfg.Validate();
  const int64_t res = cfg.residual_channels;
  input_conv_ = Conv1dLayer(cfg.in_channels, res, 1, 1, PadMode::kSame, rng, true);
  for (int d : cfg.Dilations()) {
    Layer l;
    l.dilated = Conv1dLayer(res, 2 * res, cfg.kernel, d,
                            cfg.causal ? PadMode::kCausal : PadMode::kSame, rng,
                            true);
    if (cfg.cond_channels > 0)
      l.cond_proj = Conv1dLayer(cfg.cond_channels, 2 * res, 1, 1, PadMode::kSame,
                                rng, true);
    l.res_proj = Conv1dLayer(res, res, 1, 1, PadMode::kSame, rng, true);
    l.skip_proj = Conv1dLayer(res, cfg.skip_channels, 1, 1, PadMode::kSame, rng, true);
    layers_.push_back(std::move(l));
  }
  out1_ = Conv1dLayer(cfg.skip_channels, cfg.skip_channels, 1, 1, PadMode::kSame,
                      rng, true);
  out2_ = Conv1dLayer(cfg.skip_channels, cfg.out_params, 1, 1, PadMode::kSame, rng,
                      true);
}

Var WaveNetStack::Forward(const Var& x, const Var& cond) const {
  TTSAUG_CHECK(x.value().ndim() == 2 && x.value().dim(1) == cfg_.in_channels,
               ShapeError, "wavenet input channels mismatch");
  if (cfg_.cond_channels > 0) {
    TTSAUG_CHECK(cond.defined() && cond.value().dim(0) == x.value().dim(0) &&
                     cond.value().dim(1) == cfg_.cond_channels,
                 ShapeError, "conditioning shape mismatch");
  }
  const int64_t res = cfg_.residual_channels;
  Var h = input_conv_.Forward(x);
  Var skip_sum;
  for (const auto& layer : layers_) {
    Var z = layer.dilated.Forward(h);
    if (cfg_.cond_channels > 0) z = Add(z, layer.cond_proj.Forward(cond));
    Var a = Mul(Tanh(SliceCols(z, 0, res)), Sigmoid(SliceCols(z, res, res)));
    Var s = layer.skip_proj.Forward(a);
    skip_sum = skip_sum.defined() ? Add(skip_sum, s) : s;
    h = Add(h, layer.res_proj.Forward(a));
  }
  return out2_.Forward(Relu(out1_.Forward(Relu(skip_sum))));
}

void WaveNetStack::CollectParams(const std::string& prefix,
                                 std::vector<NamedParam>* out) {
  input_conv_.Collect(prefix + ".in", out);
  for (size_t i = 0; i < layers_.size(); ++i) {
    const std::string p = prefix + ".l" + std::to_string(i);
    layers_[i].dilated.Collect(p + ".dil", out);
    if (cfg_.cond_channels > 0) layers_[i].cond_proj.Collect(p + ".cond", out);
    layers_[i].res_proj.Collect(p + ".res", out);
    layers_[i].skip_proj.Collect(p + ".skip", out);
  }
  out1_.Collect(prefix + ".out1", out);
  out2_.Collect(prefix + ".out2", out);
}

void WaveNetStack::ZeroFinalLayer() {
  std::vector<NamedParam> params;
  out2_.Collect("final", &params);
  for (auto& p : params) p.var.value().Fill(0.0);
}

WaveNetStack::LayerRef WaveNetStack::layer(int i) const {
  const Layer& l = layers_[static_cast<size_t>(i)];
  return {&l.dilated, cfg_.cond_channels > 0 ? &l.cond_proj : nullptr, &l.res_proj,
          &l.skip_proj};
}

namespace {

// y += x * w + b over row-matrices.
void AffineInto(const Tensor& x, const Tensor& w, const Tensor& b, Tensor* y,
                bool accumulate) {
  MatMulInto(x, false, w, false, y, accumulate);
  for (int64_t i = 0; i < y->dim(0); ++i)
    for (int64_t j = 0; j < y->dim(1); ++j) y->at(i, j) += b[j];
}

// Reshapes conv weight [k,cin,cout] tap j into [cin,cout].
Tensor TapMatrix(const Tensor& w, int64_t j) {
  Tensor m({w.dim(1), w.dim(2)});
  for (int64_t c = 0; c < w.dim(1); ++c)
    for (int64_t o = 0; o < w.dim(2); ++o) m.at(c, o) = w.at(j, c, o);
  return m;
}

}  // namespace

WaveNetFastInference::WaveNetFastInference(const WaveNetStack& stack, int batch)
    : batch_(batch), cfg_(stack.config()) {
  TTSAUG_CHECK(cfg_.causal, ConfigError,
               "incremental inference is for causal stacks");
  const Tensor in_w = stack.input_conv().EffectiveWeight();
  in_w_ = TapMatrix(in_w, 0);
  in_b_ = stack.input_conv().BiasValue();
  const std::vector<int> dils = cfg_.Dilations();
  for (size_t i = 0; i < dils.size(); ++i) {
    auto ref = stack.layer(static_cast<int>(i));
    LayerState ls;
    ls.dilation = dils[i];
    const Tensor wd = ref.dilated->EffectiveWeight();
    for (int64_t j = 0; j < wd.dim(0); ++j) ls.taps.push_back(TapMatrix(wd, j));
    ls.bias = ref.dilated->BiasValue();
    if (ref.cond_proj) {
      ls.cond_w = TapMatrix(ref.cond_proj->EffectiveWeight(), 0);
      ls.cond_b = ref.cond_proj->BiasValue();
    }
    ls.res_w = TapMatrix(ref.res_proj->EffectiveWeight(), 0);
    ls.res_b = ref.res_proj->BiasValue();
    ls.skip_w = TapMatrix(ref.skip_proj->EffectiveWeight(), 0);
    ls.skip_b = ref.skip_proj->BiasValue();
    const int cap = (cfg_.kernel - 1) * ls.dilation + 1;
    for (int c = 0; c < cap; ++c)
      ls.ring.emplace_back(std::vector<int64_t>{batch, cfg_.residual_channels});
    layers_.push_back(std::move(ls));
  }
  out1_w_ = TapMatrix(stack.out1().EffectiveWeight(), 0);
  out1_b_ = stack.out1().BiasValue();
  out2_w_ = TapMatrix(stack.out2().EffectiveWeight(), 0);
  out2_b_ = stack.out2().BiasValue();
}

void WaveNetFastInference::Reset() {
  for (auto& l : layers_) {
    for (auto& t : l.ring) t.Fill(0.0);
    l.head = 0;
  }
  t_ = 0;
}

void WaveNetFastInference::Step(const std::vector<double>& x_t, const Tensor& cond_t,
                                Tensor* out) {
  TTSAUG_CHECK(static_cast<int>(x_t.size()) == batch_, ShapeError,
               "batch size mismatch in fast inference");
  const int64_t res = cfg_.residual_channels;
  Tensor x({batch_, cfg_.in_channels});
  for (int b = 0; b < batch_; ++b) x.at(b, 0) = x_t[static_cast<size_t>(b)];
  Tensor h({batch_, res});
  AffineInto(x, in_w_, in_b_, &h, false);

  Tensor skip_sum({batch_, cfg_.skip_channels});
  Tensor z({batch_, 2 * res});
  Tensor a({batch_, res});
  const int k = cfg_.kernel;
  for (auto& l : layers_) {
    const int cap = static_cast<int>(l.ring.size());
    l.ring[static_cast<size_t>(l.head)] = h;  // input at time t_
    // z = sum_j ring[t - (k-1-j)*d] * W_j + biases + conditioning
    z.Fill(0.0);
    bool first = true;
    for (int j = 0; j < k; ++j) {
      const int64_t offset = static_cast<int64_t>(k - 1 - j) * l.dilation;
      if (t_ - offset < 0) continue;  // zero history
      const int idx = static_cast<int>(((l.head - offset) % cap + cap) % cap);
      MatMulInto(l.ring[static_cast<size_t>(idx)], false, l.taps[static_cast<size_t>(j)],
                 false, &z, !first);
      first = false;
    }
    for (int64_t b = 0; b < batch_; ++b)
      for (int64_t j = 0; j < 2 * res; ++j) z.at(b, j) += l.bias[j];
    if (!l.cond_w.empty()) {
      MatMulInto(cond_t, false, l.cond_w, false, &z, true);
      for (int64_t b = 0; b < batch_; ++b)
        for (int64_t j = 0; j < 2 * res; ++j) z.at(b, j) += l.cond_b[j];
    }
    for (int64_t b = 0; b < batch_; ++b)
      for (int64_t j = 0; j < res; ++j)
        a.at(b, j) = std::tanh(z.at(b, j)) / (1.0 + std::exp(-z.at(b, res + j)));
    AffineInto(a, l.skip_w, l.skip_b, &skip_sum, true);
    // h = h + a * res_w + res_b, reusing h as the next layer input.
    Tensor res_out({batch_, res});
    AffineInto(a, l.res_w, l.res_b, &res_out, false);
    for (int64_t i = 0; i < h.size(); ++i) h[i] += res_out[i];
    l.head = (l.head + 1) % cap;
  }
  for (int64_t i = 0; i < skip_sum.size(); ++i)
    skip_sum[i] = std::max(skip_sum[i], 0.0);
  Tensor mid({batch_, cfg_.skip_channels});
  AffineInto(skip_sum, out1_w_, out1_b_, &mid, false);
  for (int64_t i = 0; i < mid.size(); ++i) mid[i] = std::max(mid[i], 0.0);
  TTSAUG_CHECK(out->dim(0) == batch_ && out->dim(1) == cfg_.out_params, ShapeError,
               "fast inference output shape");
  AffineInto(mid, out2_w_, out2_b_, out, false);
  ++t_;
}

ConditionUpsampler::ConditionUpsampler(int64_t in_dim, int64_t out_channels,
                                       int kernel, int hop, RngStream* rng)
    : conv1_(in_dim, out_channels, kernel, 1, PadMode::kSame, rng, true),
      conv2_(out_channels, out_channels, kernel, 1, PadMode::kSame, rng, true),
      hop_(hop) {
  TTSAUG_CHECK(hop >= 1, ConfigError, "hop must be >= 1");
}

Var ConditionUpsampler::Forward(const Var& frame_features) const {
  const int64_t frames = frame_features.value().dim(0);
  TTSAUG_CHECK(frames >= 1, ShapeError, "empty conditioning");
  std::vector<int> times(static_cast<size_t>(frames), hop_);
  Var x = RepeatRows(frame_features, times);
  return conv2_.Forward(Relu(conv1_.Forward(x)));
}

void ConditionUpsampler::CollectParams(const std::string& prefix,
                                       std::vector<NamedParam>* out) {
  conv1_.Collect(prefix + ".c1", out);
  conv2_.Collect(prefix + ".c2", out);
}

}  // namespace ttsaug

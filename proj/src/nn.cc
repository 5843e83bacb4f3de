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

#include "ttsaug/nn.h"

#include <algorithm>
#include <cmath>

namespace ttsaug {

void XavierInit(Tensor* w, int64_t fan_in, int64_t fan_out, RngStream* rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (int64_t i = 0; i < w->size(); ++i) (*w)[i] = rng->Uniform(-a, a);
}

Linear::Linear(int64_t in, int64_t out, RngStream* rng, bool has_bias) {
  Tensor w({in, out});
  XavierInit(&w, in, out, rng);
  w_ = Var::Leaf(std::move(w), true);
  if (has_bias) b_ = Var::Leaf(Tensor({out}), true);
}

Var Linear::Forward(const Var& x) const {
  Var y = MatMul(x, w_);
  if (b_.defined()) y = AddRow(y, b_);
  return y;
}

void Linear::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  out->push_back({prefix + ".w", w_});
  if (b_.defined()) out->push_back({prefix + ".b", b_});
}

Conv1dLayer::Conv1dLayer(int64_t cin, int64_t cout, int kernel, int dilation,
                         PadMode mode, RngStream* rng, bool weight_norm,
                         bool has_bias)
    : kernel_(kernel), dilation_(dilation), weight_norm_(weight_norm) {
  TTSAUG_CHECK(kernel >= 1 && dilation >= 1, ConfigError, "conv kernel/dilation");
  Tensor w({kernel, cin, cout});
  XavierInit(&w, kernel * cin, kernel * cout, rng);
  const int span = (kernel - 1) * dilation;
  switch (mode) {
    case PadMode::kSame:
      pad_left_ = span / 2;
      pad_right_ = span - pad_left_;
      break;
    case PadMode::kCausal:
      pad_left_ = span;
      pad_right_ = 0;
      break;
    case PadMode::kValid:
      pad_left_ = pad_right_ = 0;
      break;
  }
  if (weight_norm_) {
    // Start equivalent to the plain initialization: g = ||v|| per channel.
    Tensor g({cout});
    const int64_t groups = w.size() / cout;
    for (int64_t i = 0; i < groups; ++i)
      for (int64_t o = 0; o < cout; ++o) g[o] += w[i * cout + o] * w[i * cout + o];
    for (int64_t o = 0; o < cout; ++o) g[o] = std::sqrt(g[o]);
    g_ = Var::Leaf(std::move(g), true);
  }
  v_ = Var::Leaf(std::move(w), true);
  if (has_bias) b_ = Var::Leaf(Tensor({cout}), true);
}

Var Conv1dLayer::Forward(const Var& x) const {
  Var w = weight_norm_ ? WeightNorm(v_, g_) : v_;
  return Conv1d(x, w, b_, dilation_, pad_left_, pad_right_);
}

Tensor Conv1dLayer::EffectiveWeight() const {
  if (!weight_norm_) return v_.value();
  return WeightNorm(Var::Const(v_.value()), Var::Const(g_.value())).value();
}

void Conv1dLayer::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  out->push_back({prefix + ".v", v_});
  if (g_.defined()) out->push_back({prefix + ".g", g_});
  if (b_.defined()) out->push_back({prefix + ".b", b_});
}

Embedding::Embedding(int64_t vocab, int64_t dim, RngStream* rng) {
  Tensor t({vocab, dim});
  XavierInit(&t, vocab, dim, rng);
  table_ = Var::Leaf(std::move(t), true);
}

Var Embedding::Forward(const std::vector<int>& ids) const {
  return EmbeddingLookup(table_, ids);
}

void Embedding::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  out->push_back({prefix + ".table", table_});
}

LayerNorm::LayerNorm(int64_t dim) {
  gamma_ = Var::Leaf(Tensor::Full({dim}, 1.0), true);
  beta_ = Var::Leaf(Tensor({dim}), true);
}

Var LayerNorm::Forward(const Var& x) const {
  return LayerNormRows(x, gamma_, beta_);
}

void LayerNorm::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  out->push_back({prefix + ".gamma", gamma_});
  out->push_back({prefix + ".beta", beta_});
}

LstmCell::LstmCell(int64_t input, int64_t hidden, RngStream* rng)
    : hidden_(hidden) {
  Tensor wx({input, 4 * hidden});
  Tensor wh({hidden, 4 * hidden});
  XavierInit(&wx, input + hidden, hidden, rng);
  XavierInit(&wh, input + hidden, hidden, rng);
  Tensor b({4 * hidden});
  for (int64_t i = hidden; i < 2 * hidden; ++i) b[i] = 1.0;  // forget gate
  w_x_ = Var::Leaf(std::move(wx), true);
  w_h_ = Var::Leaf(std::move(wh), true);
  b_ = Var::Leaf(std::move(b), true);
}

std::pair<Var, Var> LstmCell::Step(const Var& x, const Var& h, const Var& c) const {
  Var gates = AddRow(Add(MatMul(x, w_x_), MatMul(h, w_h_)), b_);
  Var i = Sigmoid(SliceCols(gates, 0, hidden_));
  Var f = Sigmoid(SliceCols(gates, hidden_, hidden_));
  Var g = Tanh(SliceCols(gates, 2 * hidden_, hidden_));
  Var o = Sigmoid(SliceCols(gates, 3 * hidden_, hidden_));
  Var c_new = Add(Mul(f, c), Mul(i, g));
  Var h_new = Mul(o, Tanh(c_new));
  return {h_new, c_new};
}

Var LstmCell::Sequence(const Var& x, bool reverse) const {
  const int64_t T = x.value().dim(0);
  TTSAUG_CHECK(T >= 1, ShapeError, "LstmCell::Sequence on empty input");
  Var h = Var::Const(Tensor({1, hidden_}));
  Var c = Var::Const(Tensor({1, hidden_}));
  std::vector<Var> outs(static_cast<size_t>(T));
  for (int64_t step = 0; step < T; ++step) {
    const int64_t t = reverse ? T - 1 - step : step;
    auto [h2, c2] = Step(Row(x, t), h, c);
    h = h2;
    c = c2;
    outs[static_cast<size_t>(t)] = h;
  }
  return StackRows(outs);
}

void LstmCell::Collect(const std::string& prefix, std::vector<NamedParam>* out) {
  out->push_back({prefix + ".wx", w_x_});
  out->push_back({prefix + ".wh", w_h_});
  out->push_back({prefix + ".b", b_});
}

void LstmCell::StepInference(const std::vector<double>& x, std::vector<double>* h,
                             std::vector<double>* c) const {
  const int64_t H = hidden_;
  const Tensor& wx = w_x_.value();
  const Tensor& wh = w_h_.value();
  const Tensor& b = b_.value();
  std::vector<double> gates(static_cast<size_t>(4 * H));
  for (int64_t j = 0; j < 4 * H; ++j) gates[static_cast<size_t>(j)] = b[j];
  const int64_t in = wx.dim(0);
  for (int64_t i = 0; i < in; ++i) {
    const double xi = x[static_cast<size_t>(i)];
    if (xi == 0.0) continue;
    for (int64_t j = 0; j < 4 * H; ++j) gates[static_cast<size_t>(j)] += xi * wx.at(i, j);
  }
  for (int64_t i = 0; i < H; ++i) {
    const double hi = (*h)[static_cast<size_t>(i)];
    if (hi == 0.0) continue;
    for (int64_t j = 0; j < 4 * H; ++j) gates[static_cast<size_t>(j)] += hi * wh.at(i, j);
  }
  auto sigm = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (int64_t j = 0; j < H; ++j) {
    const double ig = sigm(gates[static_cast<size_t>(j)]);
    const double fg = sigm(gates[static_cast<size_t>(H + j)]);
    const double gg = std::tanh(gates[static_cast<size_t>(2 * H + j)]);
    const double og = sigm(gates[static_cast<size_t>(3 * H + j)]);
    const double cn = fg * (*c)[static_cast<size_t>(j)] + ig * gg;
    (*c)[static_cast<size_t>(j)] = cn;
    (*h)[static_cast<size_t>(j)] = og * std::tanh(cn);
  }
}

MultiHeadSelfAttention::MultiHeadSelfAttention(int64_t hidden, int heads,
                                               RngStream* rng)
    : heads_(heads), hidden_(hidden) {
  TTSAUG_CHECK(hidden % heads == 0, ConfigError,
               "attention hidden size not divisible by heads");
  wq_ = Linear(hidden, hidden, rng);
  wk_ = Linear(hidden, hidden, rng);
  wv_ = Linear(hidden, hidden, rng);
  wo_ = Linear(hidden, hidden, rng);
}

Var MultiHeadSelfAttention::Forward(const Var& x,
                                    const std::vector<uint8_t>* mask) const {
  const int64_t dh = hidden_ / heads_;
  Var q = wq_.Forward(x);
  Var k = wk_.Forward(x);
  Var v = wv_.Forward(x);
  std::vector<Var> head_outs;
  head_outs.reserve(static_cast<size_t>(heads_));
  for (int h = 0; h < heads_; ++h) {
    Var qh = SliceCols(q, h * dh, dh);
    Var kh = SliceCols(k, h * dh, dh);
    Var vh = SliceCols(v, h * dh, dh);
    Var scores = Scale(MatMul(qh, Transpose(kh)), 1.0 / std::sqrt(static_cast<double>(dh)));
    Var attn = SoftmaxRows(scores, mask);
    head_outs.push_back(MatMul(attn, vh));
  }
  Var cat = head_outs[0];
  for (size_t h = 1; h < head_outs.size(); ++h) cat = ConcatCols(cat, head_outs[h]);
  return wo_.Forward(cat);
}

void MultiHeadSelfAttention::Collect(const std::string& prefix,
                                     std::vector<NamedParam>* out) {
  wq_.Collect(prefix + ".wq", out);
  wk_.Collect(prefix + ".wk", out);
  wv_.Collect(prefix + ".wv", out);
  wo_.Collect(prefix + ".wo", out);
}

Tensor SinusoidalPositions(int64_t length, int64_t dim) {
  Tensor pe({length, dim});
  for (int64_t t = 0; t < length; ++t) {
    for (int64_t d = 0; d < dim; ++d) {
      const double exponent = static_cast<double>(2 * (d / 2)) / static_cast<double>(dim);
      const double angle = static_cast<double>(t) / std::pow(10000.0, exponent);
      pe.at(t, d) = (d % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

}  // namespace ttsaug

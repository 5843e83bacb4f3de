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

#ifndef TTSAUG_NN_H_
#define TTSAUG_NN_H_

#include <string>
#include <utility>
#include <vector>

#include "ttsaug/autograd.h"
#include "ttsaug/rng.h"

namespace ttsaug {

struct NamedParam {
  std::string name;
  Var var;
};

// Xavier (Glorot) uniform initialization.
void XavierInit(Tensor* w, int64_t fan_in, int64_t fan_out, RngStream* rng);

class Linear {
 public:
  Linear() = default;
  Linear(int64_t in, int64_t out, RngStream* rng, bool has_bias = true);
  Var Forward(const Var& x) const;  // [T,in] -> [T,out]
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);
  const Var& weight() const { return w_; }
  const Var& bias() const { return b_; }
  int64_t in_dim() const { return w_.value().dim(0); }
  int64_t out_dim() const { return w_.value().dim(1); }

 private:
  Var w_;  // [in, out]
  Var b_;  // [out], undefined when has_bias == false
};

enum class PadMode { kSame, kCausal, kValid };

class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  Conv1dLayer(int64_t cin, int64_t cout, int kernel, int dilation, PadMode mode,
              RngStream* rng, bool weight_norm = false, bool has_bias = true);
  Var Forward(const Var& x) const;  // [T,cin] -> [T',cout]
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);
  // Effective weight [k,cin,cout] after weight normalization.
  Tensor EffectiveWeight() const;
  const Tensor& BiasValue() const { return b_.value(); }
  int kernel() const { return kernel_; }
  int dilation() const { return dilation_; }
  int pad_left() const { return pad_left_; }
  int pad_right() const { return pad_right_; }

 private:
  Var v_;  // direction [k,cin,cout]
  Var g_;  // per-channel gain, defined only under weight norm
  Var b_;
  int kernel_ = 0;
  int dilation_ = 1;
  int pad_left_ = 0;
  int pad_right_ = 0;
  bool weight_norm_ = false;
};

class Embedding {
 public:
  Embedding() = default;
  Embedding(int64_t vocab, int64_t dim, RngStream* rng);
  Var Forward(const std::vector<int>& ids) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);
  const Var& table() const { return table_; }
  int64_t vocab() const { return table_.value().dim(0); }
  int64_t dim() const { return table_.value().dim(1); }

 private:
  Var table_;
};

class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(int64_t dim);
  Var Forward(const Var& x) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);

 private:
  Var gamma_;
  Var beta_;
};

// Single-direction LSTM. Gate order i, f, g, o; forget-gate bias starts at 1.
class LstmCell {
 public:
  LstmCell() = default;
  LstmCell(int64_t input, int64_t hidden, RngStream* rng);
  int64_t hidden() const { return hidden_; }
  // One step on a [1,input] row. h and c are [1,hidden].
  std::pair<Var, Var> Step(const Var& x, const Var& h, const Var& c) const;
  // Whole sequence [T,input] -> [T,hidden], zero initial state.
  Var Sequence(const Var& x, bool reverse = false) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);
  // Graph-free step for sample-level inference loops.
  void StepInference(const std::vector<double>& x, std::vector<double>* h,
                     std::vector<double>* c) const;

 private:
  Var w_x_;  // [input, 4H]
  Var w_h_;  // [H, 4H]
  Var b_;    // [4H]
  int64_t hidden_ = 0;
};

class MultiHeadSelfAttention {
 public:
  MultiHeadSelfAttention() = default;
  MultiHeadSelfAttention(int64_t hidden, int heads, RngStream* rng);
  // mask: per-position validity (1 = real, 0 = padded); nullptr = all valid.
  Var Forward(const Var& x, const std::vector<uint8_t>* mask) const;
  void Collect(const std::string& prefix, std::vector<NamedParam>* out);

 private:
  Linear wq_, wk_, wv_, wo_;
  int heads_ = 1;
  int64_t hidden_ = 0;
};

// Sinusoidal position table [T, dim].
Tensor SinusoidalPositions(int64_t length, int64_t dim);

}  // namespace ttsaug

#endif  // TTSAUG_NN_H_

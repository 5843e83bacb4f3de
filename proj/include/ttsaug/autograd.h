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

#ifndef TTSAUG_AUTOGRAD_H_
#define TTSAUG_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ttsaug/rng.h"
#include "ttsaug/tensor.h"

namespace ttsaug {

// Reverse-mode automatic differentiation over Tensor. Each op builds a graph
// node whose backward closure scatters the node's gradient into its parents.
// Graphs are per-step and freed when the last Var handle goes out of scope.

struct Node {
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;
  int visit_mark = 0;

  void EnsureGrad() {
    if (grad.empty()) grad = Tensor::Zeros(value.shape());
  }
};

using NodePtr = std::shared_ptr<Node>;

class Var {
 public:
  Var() = default;
  explicit Var(NodePtr n) : node_(std::move(n)) {}

  static Var Leaf(Tensor v, bool requires_grad);
  static Var Const(Tensor v) { return Leaf(std::move(v), false); }
  static Var Scalar(double v) { return Const(Tensor::FromVector({v})); }

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& value() { return node_->value; }
  Tensor& grad() {
    node_->EnsureGrad();
    return node_->grad;
  }
  bool requires_grad() const { return node_->requires_grad; }
  const NodePtr& node() const { return node_; }

  double item() const { return node_->value[0]; }

 private:
  NodePtr node_;
};

// Runs reverse accumulation from a scalar loss; seeds d(loss)/d(loss) = 1.
void Backward(const Var& loss);

// --- elementwise and broadcast arithmetic ---
Var Add(const Var& a, const Var& b);            // same shape
Var AddRow(const Var& a, const Var& row);       // [T,D] + [D]
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);            // same shape
Var MulRow(const Var& a, const Var& row);       // [T,D] * [D]
Var Scale(const Var& a, double s);
Var AddScalar(const Var& a, double s);

// --- activations and pointwise functions ---
Var Relu(const Var& a);
Var LeakyRelu(const Var& a, double alpha);
Var Tanh(const Var& a);
Var Sigmoid(const Var& a);
Var Exp(const Var& a);
Var Log(const Var& a);
Var Sqrt(const Var& a);
Var Abs(const Var& a);
Var Square(const Var& a);
Var ClampMin(const Var& a, double lo);  // max(a, lo); gradient 0 where clamped

// --- linear algebra and structure ---
Var MatMul(const Var& a, const Var& b);
Var Transpose(const Var& a);
// Same element count, new shape; gradient passes through unchanged.
Var Reshape(const Var& a, std::vector<int64_t> shape);
Var ConcatCols(const Var& a, const Var& b);
Var SliceCols(const Var& a, int64_t begin, int64_t len);
Var Row(const Var& a, int64_t r);
Var SliceRows(const Var& a, int64_t begin, int64_t len);
Var StackRows(const std::vector<Var>& rows);
// Repeats row p of x times[p] times; the length-regulation primitive.
Var RepeatRows(const Var& x, const std::vector<int>& times);
// Zeroes rows where keep[i] == 0; identity elsewhere.
Var ZeroRows(const Var& x, const std::vector<uint8_t>& keep);
// Rows of table selected by ids; gradient scatter-adds into the table.
Var EmbeddingLookup(const Var& table, const std::vector<int>& ids);
// Extracts overlapping frames [num_frames, frame_len] from a 1-D signal.
Var FrameSignal(const Var& x, int64_t frame_len, int64_t hop);

// --- reductions and losses ---
Var Sum(const Var& a);
Var Mean(const Var& a);
Var L1Loss(const Var& pred, const Var& target);
Var MseLoss(const Var& pred, const Var& target);

// --- neural-net specific ---
// Row-wise softmax; where mask is given, positions with mask[j]==0 get
// probability exactly 0 (scores are excluded from the normalization).
Var SoftmaxRows(const Var& a, const std::vector<uint8_t>* mask = nullptr);
Var LayerNormRows(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);
// 1-D convolution over [T, Cin] with weight [k, Cin, Cout], zero padding.
Var Conv1d(const Var& x, const Var& w, const Var& bias, int dilation,
           int pad_left, int pad_right);
// Weight-normalized weight: w = g * v / ||v|| per output channel (last dim).
Var WeightNorm(const Var& v, const Var& g);
Var Dropout(const Var& x, double p, RngStream* rng, bool enabled);
Var Detach(const Var& a);

}  // namespace ttsaug

#endif  // TTSAUG_AUTOGRAD_H_

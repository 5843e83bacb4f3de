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

#include "ttsaug/autograd.h"

#include <algorithm>
#include <cmath>

namespace ttsaug {

namespace {

NodePtr MakeNode(Tensor value, std::vector<NodePtr> parents,
                 std::function<void(Node&)> backward) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->parents = std::move(parents);
  for (const auto& p : n->parents) {
    if (p->requires_grad) n->requires_grad = true;
  }
  if (n->requires_grad) n->backward = std::move(backward);
  return n;
}

void CheckSameShape(const Var& a, const Var& b, const char* op) {
  TTSAUG_CHECK(a.value().SameShape(b.value()), ShapeError,
               std::string(op) + ": " + a.value().ShapeStr() + " vs " +
                   b.value().ShapeStr());
}

// Elementwise unary op: value = f(x), dx += df(x, y, dy).
Var UnaryOp(const Var& a, double (*f)(double),
            double (*df)(double x, double y)) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, df](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.value.size(); ++i) {
      an->grad[i] += df(an->value[i], n.value[i]) * n.grad[i];
    }
  }));
}

}  // namespace

Var Var::Leaf(Tensor v, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->requires_grad = requires_grad;
  return Var(n);
}

void Backward(const Var& loss) {
  TTSAUG_CHECK(loss.value().size() == 1, ShapeError, "Backward needs scalar loss");
  // Iterative post-order topological sort (graphs can be deep for AR loops).
  std::vector<Node*> order;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  loss.node()->visit_mark = 1;
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx++].get();
      if (p->visit_mark == 0 && p->requires_grad) {
        p->visit_mark = 1;
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  loss.node()->EnsureGrad();
  loss.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    n->visit_mark = 0;
    if (n->backward && !n->grad.empty()) n->backward(*n);
  }
}

Var Add(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Add");
  Tensor y(a.value().shape());
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] + b.value()[i];
  NodePtr an = a.node(), bn = b.node();
  return Var(MakeNode(std::move(y), {an, bn}, [an, bn](Node& n) {
    for (const NodePtr& p : {an, bn}) {
      if (!p->requires_grad) continue;
      p->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i) p->grad[i] += n.grad[i];
    }
  }));
}

Var AddRow(const Var& a, const Var& row) {
  const Tensor& x = a.value();
  const Tensor& r = row.value();
  TTSAUG_CHECK(x.ndim() == 2 && r.size() == x.dim(1), ShapeError,
               "AddRow: " + x.ShapeStr() + " + " + r.ShapeStr());
  Tensor y(x.shape());
  const int64_t T = x.dim(0), D = x.dim(1);
  for (int64_t t = 0; t < T; ++t)
    for (int64_t d = 0; d < D; ++d) y.at(t, d) = x.at(t, d) + r[d];
  NodePtr an = a.node(), rn = row.node();
  return Var(MakeNode(std::move(y), {an, rn}, [an, rn, T, D](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i) an->grad[i] += n.grad[i];
    }
    if (rn->requires_grad) {
      rn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < D; ++d) rn->grad[d] += n.grad.at(t, d);
    }
  }));
}

Var Sub(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Sub");
  Tensor y(a.value().shape());
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] - b.value()[i];
  NodePtr an = a.node(), bn = b.node();
  return Var(MakeNode(std::move(y), {an, bn}, [an, bn](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i) an->grad[i] += n.grad[i];
    }
    if (bn->requires_grad) {
      bn->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i) bn->grad[i] -= n.grad[i];
    }
  }));
}

Var Mul(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Mul");
  Tensor y(a.value().shape());
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] * b.value()[i];
  NodePtr an = a.node(), bn = b.node();
  return Var(MakeNode(std::move(y), {an, bn}, [an, bn](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i)
        an->grad[i] += bn->value[i] * n.grad[i];
    }
    if (bn->requires_grad) {
      bn->EnsureGrad();
      for (int64_t i = 0; i < n.grad.size(); ++i)
        bn->grad[i] += an->value[i] * n.grad[i];
    }
  }));
}

Var MulRow(const Var& a, const Var& row) {
  const Tensor& x = a.value();
  const Tensor& r = row.value();
  TTSAUG_CHECK(x.ndim() == 2 && r.size() == x.dim(1), ShapeError, "MulRow shapes");
  Tensor y(x.shape());
  const int64_t T = x.dim(0), D = x.dim(1);
  for (int64_t t = 0; t < T; ++t)
    for (int64_t d = 0; d < D; ++d) y.at(t, d) = x.at(t, d) * r[d];
  NodePtr an = a.node(), rn = row.node();
  return Var(MakeNode(std::move(y), {an, rn}, [an, rn, T, D](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < D; ++d)
          an->grad.at(t, d) += rn->value[d] * n.grad.at(t, d);
    }
    if (rn->requires_grad) {
      rn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < D; ++d)
          rn->grad[d] += an->value.at(t, d) * n.grad.at(t, d);
    }
  }));
}

Var Scale(const Var& a, double s) {
  Tensor y(a.value().shape());
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] * s;
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, s](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i) an->grad[i] += s * n.grad[i];
  }));
}

Var AddScalar(const Var& a, double s) {
  Tensor y(a.value().shape());
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] + s;
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i) an->grad[i] += n.grad[i];
  }));
}

Var Relu(const Var& a) {
  return UnaryOp(a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var LeakyRelu(const Var& a, double alpha) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : alpha * x[i];
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, alpha](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      an->grad[i] += (an->value[i] > 0.0 ? 1.0 : alpha) * n.grad[i];
  }));
}

Var Tanh(const Var& a) {
  return UnaryOp(a, [](double x) { return std::tanh(x); },
                 [](double, double y) { return 1.0 - y * y; });
}

Var Sigmoid(const Var& a) {
  return UnaryOp(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
                 [](double, double y) { return y * (1.0 - y); });
}

Var Exp(const Var& a) {
  return UnaryOp(a, [](double x) { return std::exp(x); },
                 [](double, double y) { return y; });
}

Var Log(const Var& a) {
  return UnaryOp(a, [](double x) { return std::log(x); },
                 [](double x, double) { return 1.0 / x; });
}

Var Sqrt(const Var& a) {
  return UnaryOp(a, [](double x) { return std::sqrt(x); },
                 [](double, double y) { return 0.5 / y; });
}

Var Abs(const Var& a) {
  return UnaryOp(a, [](double x) { return std::abs(x); },
                 [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var Square(const Var& a) {
  return UnaryOp(a, [](double x) { return x * x; },
                 [](double x, double) { return 2.0 * x; });
}

Var ClampMin(const Var& a, double lo) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i], lo);
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, lo](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      if (an->value[i] > lo) an->grad[i] += n.grad[i];
  }));
}

Var MatMul(const Var& a, const Var& b) {
  Tensor y({a.value().dim(0), b.value().dim(1)});
  MatMulInto(a.value(), false, b.value(), false, &y, false);
  NodePtr an = a.node(), bn = b.node();
  return Var(MakeNode(std::move(y), {an, bn}, [an, bn](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      MatMulInto(n.grad, false, bn->value, true, &an->grad, true);
    }
    if (bn->requires_grad) {
      bn->EnsureGrad();
      MatMulInto(an->value, true, n.grad, false, &bn->grad, true);
    }
  }));
}

Var Reshape(const Var& a, std::vector<int64_t> shape) {
  Tensor y(std::move(shape));
  TTSAUG_CHECK(y.size() == a.value().size(), ShapeError,
               "Reshape must preserve element count");
  for (int64_t i = 0; i < y.size(); ++i) y[i] = a.value()[i];
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i) an->grad[i] += n.grad[i];
  }));
}

Var Transpose(const Var& a) {
  const Tensor& x = a.value();
  TTSAUG_CHECK(x.ndim() == 2, ShapeError, "Transpose expects 2-D");
  Tensor y({x.dim(1), x.dim(0)});
  for (int64_t i = 0; i < x.dim(0); ++i)
    for (int64_t j = 0; j < x.dim(1); ++j) y.at(j, i) = x.at(i, j);
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < n.value.dim(0); ++i)
      for (int64_t j = 0; j < n.value.dim(1); ++j)
        an->grad.at(j, i) += n.grad.at(i, j);
  }));
}

Var ConcatCols(const Var& a, const Var& b) {
  const Tensor& xa = a.value();
  const Tensor& xb = b.value();
  TTSAUG_CHECK(xa.ndim() == 2 && xb.ndim() == 2 && xa.dim(0) == xb.dim(0),
               ShapeError, "ConcatCols row mismatch");
  const int64_t T = xa.dim(0), Da = xa.dim(1), Db = xb.dim(1);
  Tensor y({T, Da + Db});
  for (int64_t t = 0; t < T; ++t) {
    for (int64_t d = 0; d < Da; ++d) y.at(t, d) = xa.at(t, d);
    for (int64_t d = 0; d < Db; ++d) y.at(t, Da + d) = xb.at(t, d);
  }
  NodePtr an = a.node(), bn = b.node();
  return Var(MakeNode(std::move(y), {an, bn}, [an, bn, T, Da, Db](Node& n) {
    if (an->requires_grad) {
      an->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < Da; ++d) an->grad.at(t, d) += n.grad.at(t, d);
    }
    if (bn->requires_grad) {
      bn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < Db; ++d) bn->grad.at(t, d) += n.grad.at(t, Da + d);
    }
  }));
}

Var SliceCols(const Var& a, int64_t begin, int64_t len) {
  const Tensor& x = a.value();
  TTSAUG_CHECK(x.ndim() == 2 && begin >= 0 && begin + len <= x.dim(1), ShapeError,
               "SliceCols out of range");
  const int64_t T = x.dim(0);
  Tensor y({T, len});
  for (int64_t t = 0; t < T; ++t)
    for (int64_t d = 0; d < len; ++d) y.at(t, d) = x.at(t, begin + d);
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, begin, len, T](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t t = 0; t < T; ++t)
      for (int64_t d = 0; d < len; ++d) an->grad.at(t, begin + d) += n.grad.at(t, d);
  }));
}

Var Row(const Var& a, int64_t r) { return SliceRows(a, r, 1); }

Var SliceRows(const Var& a, int64_t begin, int64_t len) {
  const Tensor& x = a.value();
  TTSAUG_CHECK(x.ndim() == 2 && begin >= 0 && begin + len <= x.dim(0), ShapeError,
               "SliceRows out of range");
  const int64_t D = x.dim(1);
  Tensor y({len, D});
  for (int64_t t = 0; t < len; ++t)
    for (int64_t d = 0; d < D; ++d) y.at(t, d) = x.at(begin + t, d);
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, begin, len, D](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t t = 0; t < len; ++t)
      for (int64_t d = 0; d < D; ++d) an->grad.at(begin + t, d) += n.grad.at(t, d);
  }));
}

Var StackRows(const std::vector<Var>& rows) {
  TTSAUG_CHECK(!rows.empty(), ShapeError, "StackRows: empty");
  const int64_t D = rows[0].value().cols();
  int64_t T = 0;
  for (const Var& r : rows) {
    TTSAUG_CHECK(r.value().ndim() == 2 && r.value().dim(1) == D, ShapeError,
                 "StackRows: inconsistent widths");
    T += r.value().dim(0);
  }
  Tensor y({T, D});
  std::vector<NodePtr> parents;
  parents.reserve(rows.size());
  int64_t at = 0;
  std::vector<int64_t> offsets;
  for (const Var& r : rows) {
    const Tensor& x = r.value();
    offsets.push_back(at);
    for (int64_t t = 0; t < x.dim(0); ++t)
      for (int64_t d = 0; d < D; ++d) y.at(at + t, d) = x.at(t, d);
    at += x.dim(0);
    parents.push_back(r.node());
  }
  auto parents_copy = parents;
  return Var(MakeNode(std::move(y), std::move(parents),
                      [parents_copy, offsets, D](Node& n) {
    for (size_t i = 0; i < parents_copy.size(); ++i) {
      const NodePtr& p = parents_copy[i];
      if (!p->requires_grad) continue;
      p->EnsureGrad();
      const int64_t rows_i = p->value.dim(0);
      for (int64_t t = 0; t < rows_i; ++t)
        for (int64_t d = 0; d < D; ++d)
          p->grad.at(t, d) += n.grad.at(offsets[i] + t, d);
    }
  }));
}

Var RepeatRows(const Var& x, const std::vector<int>& times) {
  const Tensor& v = x.value();
  TTSAUG_CHECK(v.ndim() == 2, ShapeError, "RepeatRows expects 2-D");
  TTSAUG_CHECK(static_cast<int64_t>(times.size()) == v.dim(0), AlignmentError,
               "RepeatRows: durations length != rows");
  int64_t T = 0;
  for (int r : times) {
    TTSAUG_CHECK(r >= 1, AlignmentError, "RepeatRows: duration < 1");
    T += r;
  }
  const int64_t D = v.dim(1);
  Tensor y({T, D});
  int64_t at = 0;
  for (int64_t p = 0; p < v.dim(0); ++p) {
    for (int r = 0; r < times[static_cast<size_t>(p)]; ++r) {
      for (int64_t d = 0; d < D; ++d) y.at(at, d) = v.at(p, d);
      ++at;
    }
  }
  NodePtr xn = x.node();
  return Var(MakeNode(std::move(y), {xn}, [xn, times, D](Node& n) {
    if (!xn->requires_grad) return;
    xn->EnsureGrad();
    int64_t at = 0;
    for (int64_t p = 0; p < xn->value.dim(0); ++p) {
      for (int r = 0; r < times[static_cast<size_t>(p)]; ++r) {
        for (int64_t d = 0; d < D; ++d) xn->grad.at(p, d) += n.grad.at(at, d);
        ++at;
      }
    }
  }));
}

Var ZeroRows(const Var& x, const std::vector<uint8_t>& keep) {
  const Tensor& v = x.value();
  TTSAUG_CHECK(v.ndim() == 2 && static_cast<int64_t>(keep.size()) == v.dim(0),
               ShapeError, "ZeroRows mask length");
  Tensor y(v.shape());
  const int64_t D = v.dim(1);
  for (int64_t t = 0; t < v.dim(0); ++t) {
    if (!keep[static_cast<size_t>(t)]) continue;
    for (int64_t d = 0; d < D; ++d) y.at(t, d) = v.at(t, d);
  }
  NodePtr xn = x.node();
  return Var(MakeNode(std::move(y), {xn}, [xn, keep, D](Node& n) {
    if (!xn->requires_grad) return;
    xn->EnsureGrad();
    for (int64_t t = 0; t < xn->value.dim(0); ++t) {
      if (!keep[static_cast<size_t>(t)]) continue;
      for (int64_t d = 0; d < D; ++d) xn->grad.at(t, d) += n.grad.at(t, d);
    }
  }));
}

Var EmbeddingLookup(const Var& table, const std::vector<int>& ids) {
  const Tensor& w = table.value();
  TTSAUG_CHECK(w.ndim() == 2, ShapeError, "EmbeddingLookup table must be 2-D");
  const int64_t D = w.dim(1);
  Tensor y({static_cast<int64_t>(ids.size()), D});
  for (size_t i = 0; i < ids.size(); ++i) {
    TTSAUG_CHECK(ids[i] >= 0 && ids[i] < w.dim(0), DataError,
                 "embedding index out of range");
    for (int64_t d = 0; d < D; ++d) y.at(static_cast<int64_t>(i), d) = w.at(ids[i], d);
  }
  NodePtr tn = table.node();
  return Var(MakeNode(std::move(y), {tn}, [tn, ids, D](Node& n) {
    if (!tn->requires_grad) return;
    tn->EnsureGrad();
    for (size_t i = 0; i < ids.size(); ++i)
      for (int64_t d = 0; d < D; ++d)
        tn->grad.at(ids[i], d) += n.grad.at(static_cast<int64_t>(i), d);
  }));
}

Var FrameSignal(const Var& x, int64_t frame_len, int64_t hop) {
  const Tensor& v = x.value();
  TTSAUG_CHECK(v.ndim() == 1, ShapeError, "FrameSignal expects 1-D signal");
  TTSAUG_CHECK(v.size() >= frame_len, ShapeError, "signal shorter than one frame");
  const int64_t F = (v.size() - frame_len) / hop + 1;
  Tensor y({F, frame_len});
  for (int64_t f = 0; f < F; ++f)
    for (int64_t i = 0; i < frame_len; ++i) y.at(f, i) = v[f * hop + i];
  NodePtr xn = x.node();
  return Var(MakeNode(std::move(y), {xn}, [xn, F, frame_len, hop](Node& n) {
    if (!xn->requires_grad) return;
    xn->EnsureGrad();
    for (int64_t f = 0; f < F; ++f)
      for (int64_t i = 0; i < frame_len; ++i)
        xn->grad[f * hop + i] += n.grad.at(f, i);
  }));
}

Var Sum(const Var& a) {
  double s = 0.0;
  for (int64_t i = 0; i < a.value().size(); ++i) s += a.value()[i];
  NodePtr an = a.node();
  return Var(MakeNode(Tensor::FromVector({s}), {an}, [an](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    for (int64_t i = 0; i < an->grad.size(); ++i) an->grad[i] += n.grad[0];
  }));
}

Var Mean(const Var& a) {
  const int64_t count = a.value().size();
  TTSAUG_CHECK(count > 0, ShapeError, "Mean of empty tensor");
  return Scale(Sum(a), 1.0 / static_cast<double>(count));
}

Var L1Loss(const Var& pred, const Var& target) {
  return Mean(Abs(Sub(pred, target)));
}

Var MseLoss(const Var& pred, const Var& target) {
  return Mean(Square(Sub(pred, target)));
}

Var SoftmaxRows(const Var& a, const std::vector<uint8_t>* mask) {
  const Tensor& x = a.value();
  TTSAUG_CHECK(x.ndim() == 2, ShapeError, "SoftmaxRows expects 2-D");
  const int64_t T = x.dim(0), D = x.dim(1);
  if (mask) {
    TTSAUG_CHECK(static_cast<int64_t>(mask->size()) == D, ShapeError,
                 "softmax mask length");
  }
  Tensor y(x.shape());
  for (int64_t t = 0; t < T; ++t) {
    double mx = -1e300;
    for (int64_t d = 0; d < D; ++d) {
      if (mask && !(*mask)[static_cast<size_t>(d)]) continue;
      mx = std::max(mx, x.at(t, d));
    }
    double z = 0.0;
    for (int64_t d = 0; d < D; ++d) {
      if (mask && !(*mask)[static_cast<size_t>(d)]) {
        y.at(t, d) = 0.0;
        continue;
      }
      y.at(t, d) = std::exp(x.at(t, d) - mx);
      z += y.at(t, d);
    }
    TTSAUG_CHECK(z > 0.0, NumericError, "softmax row fully masked");
    for (int64_t d = 0; d < D; ++d) y.at(t, d) /= z;
  }
  NodePtr an = a.node();
  return Var(MakeNode(std::move(y), {an}, [an, T, D](Node& n) {
    if (!an->requires_grad) return;
    an->EnsureGrad();
    // dx = y * (dy - sum(dy * y)) row-wise; masked entries have y == 0.
    for (int64_t t = 0; t < T; ++t) {
      double dot = 0.0;
      for (int64_t d = 0; d < D; ++d) dot += n.grad.at(t, d) * n.value.at(t, d);
      for (int64_t d = 0; d < D; ++d)
        an->grad.at(t, d) += n.value.at(t, d) * (n.grad.at(t, d) - dot);
    }
  }));
}

Var LayerNormRows(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Tensor& v = x.value();
  TTSAUG_CHECK(v.ndim() == 2, ShapeError, "LayerNormRows expects 2-D");
  const int64_t T = v.dim(0), D = v.dim(1);
  TTSAUG_CHECK(gamma.value().size() == D && beta.value().size() == D, ShapeError,
               "LayerNorm parameter size");
  Tensor y(v.shape());
  Tensor xhat(v.shape());
  std::vector<double> inv_std(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    double mean = 0.0;
    for (int64_t d = 0; d < D; ++d) mean += v.at(t, d);
    mean /= static_cast<double>(D);
    double var = 0.0;
    for (int64_t d = 0; d < D; ++d) {
      const double c = v.at(t, d) - mean;
      var += c * c;
    }
    var /= static_cast<double>(D);
    const double istd = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(t)] = istd;
    for (int64_t d = 0; d < D; ++d) {
      xhat.at(t, d) = (v.at(t, d) - mean) * istd;
      y.at(t, d) = xhat.at(t, d) * gamma.value()[d] + beta.value()[d];
    }
  }
  NodePtr xn = x.node(), gn = gamma.node(), bn = beta.node();
  return Var(MakeNode(std::move(y), {xn, gn, bn},
                      [xn, gn, bn, xhat, inv_std, T, D](Node& n) {
    if (gn->requires_grad) {
      gn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < D; ++d)
          gn->grad[d] += n.grad.at(t, d) * xhat.at(t, d);
    }
    if (bn->requires_grad) {
      bn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t)
        for (int64_t d = 0; d < D; ++d) bn->grad[d] += n.grad.at(t, d);
    }
    if (xn->requires_grad) {
      xn->EnsureGrad();
      for (int64_t t = 0; t < T; ++t) {
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int64_t d = 0; d < D; ++d) {
          const double dy = n.grad.at(t, d) * gn->value[d];
          sum_dy += dy;
          sum_dy_xhat += dy * xhat.at(t, d);
        }
        const double istd = inv_std[static_cast<size_t>(t)];
        for (int64_t d = 0; d < D; ++d) {
          const double dy = n.grad.at(t, d) * gn->value[d];
          xn->grad.at(t, d) +=
              istd * (dy - sum_dy / static_cast<double>(D) -
                      xhat.at(t, d) * sum_dy_xhat / static_cast<double>(D));
        }
      }
    }
  }));
}

Var Conv1d(const Var& x, const Var& w, const Var& bias, int dilation,
           int pad_left, int pad_right) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  TTSAUG_CHECK(xv.ndim() == 2 && wv.ndim() == 3, ShapeError, "Conv1d shapes");
  const int64_t T = xv.dim(0), cin = xv.dim(1);
  const int64_t k = wv.dim(0), cout = wv.dim(2);
  TTSAUG_CHECK(wv.dim(1) == cin, ShapeError,
               "Conv1d channel mismatch: input " + xv.ShapeStr() + " weight " +
                   wv.ShapeStr());
  TTSAUG_CHECK(dilation >= 1, ConfigError, "Conv1d dilation >= 1");
  const int64_t span = (k - 1) * dilation;
  const int64_t t_out = T + pad_left + pad_right - span;
  TTSAUG_CHECK(t_out >= 1, ShapeError, "Conv1d output would be empty");

  // im2col: [t_out, k*cin] followed by one GEMM against [k*cin, cout].
  Tensor col({t_out, k * cin});
  for (int64_t t = 0; t < t_out; ++t) {
    for (int64_t j = 0; j < k; ++j) {
      const int64_t src = t - pad_left + j * dilation;
      if (src < 0 || src >= T) continue;
      for (int64_t c = 0; c < cin; ++c) col.at(t, j * cin + c) = xv.at(src, c);
    }
  }
  Tensor wmat({k * cin, cout});
  for (int64_t j = 0; j < k; ++j)
    for (int64_t c = 0; c < cin; ++c)
      for (int64_t o = 0; o < cout; ++o) wmat.at(j * cin + c, o) = wv.at(j, c, o);
  Tensor y({t_out, cout});
  MatMulInto(col, false, wmat, false, &y, false);
  const bool has_bias = bias.defined();
  if (has_bias) {
    TTSAUG_CHECK(bias.value().size() == cout, ShapeError, "Conv1d bias size");
    for (int64_t t = 0; t < t_out; ++t)
      for (int64_t o = 0; o < cout; ++o) y.at(t, o) += bias.value()[o];
  }
  std::vector<NodePtr> parents = {x.node(), w.node()};
  if (has_bias) parents.push_back(bias.node());
  NodePtr xn = x.node(), wn = w.node();
  NodePtr bn = has_bias ? bias.node() : nullptr;
  return Var(MakeNode(std::move(y), std::move(parents),
                      [xn, wn, bn, col = std::move(col), wmat = std::move(wmat),
                       dilation, pad_left, T, cin, k, cout, t_out](Node& n) {
    if (bn && bn->requires_grad) {
      bn->EnsureGrad();
      for (int64_t t = 0; t < t_out; ++t)
        for (int64_t o = 0; o < cout; ++o) bn->grad[o] += n.grad.at(t, o);
    }
    if (wn->requires_grad) {
      wn->EnsureGrad();
      Tensor dw({k * cin, cout});
      MatMulInto(col, true, n.grad, false, &dw, false);
      for (int64_t j = 0; j < k; ++j)
        for (int64_t c = 0; c < cin; ++c)
          for (int64_t o = 0; o < cout; ++o)
            wn->grad.at(j, c, o) += dw.at(j * cin + c, o);
    }
    if (xn->requires_grad) {
      xn->EnsureGrad();
      Tensor dcol({t_out, k * cin});
      MatMulInto(n.grad, false, wmat, true, &dcol, false);
      for (int64_t t = 0; t < t_out; ++t) {
        for (int64_t j = 0; j < k; ++j) {
          const int64_t src = t - pad_left + j * dilation;
          if (src < 0 || src >= T) continue;
          for (int64_t c = 0; c < cin; ++c)
            xn->grad.at(src, c) += dcol.at(t, j * cin + c);
        }
      }
    }
  }));
}

Var WeightNorm(const Var& v, const Var& g) {
  const Tensor& vv = v.value();
  const Tensor& gv = g.value();
  const int64_t cout = vv.ndim() == 3 ? vv.dim(2) : vv.dim(1);
  TTSAUG_CHECK(gv.size() == cout, ShapeError, "WeightNorm gain size");
  // Norms taken over all elements feeding one output channel (last index).
  std::vector<double> norms(static_cast<size_t>(cout), 0.0);
  const int64_t groups = vv.size() / cout;
  for (int64_t i = 0; i < groups; ++i)
    for (int64_t o = 0; o < cout; ++o) {
      const double e = vv[i * cout + o];
      norms[static_cast<size_t>(o)] += e * e;
    }
  for (double& nn : norms) nn = std::sqrt(nn) + 1e-12;
  Tensor y(vv.shape());
  for (int64_t i = 0; i < groups; ++i)
    for (int64_t o = 0; o < cout; ++o)
      y[i * cout + o] = gv[o] * vv[i * cout + o] / norms[static_cast<size_t>(o)];
  NodePtr vn = v.node(), gn = g.node();
  return Var(MakeNode(std::move(y), {vn, gn}, [vn, gn, norms, groups, cout](Node& n) {
    // dv = g/||v|| (dw - (dw . vhat) vhat), dg = dw . vhat, per channel.
    std::vector<double> dots(static_cast<size_t>(cout), 0.0);
    for (int64_t i = 0; i < groups; ++i)
      for (int64_t o = 0; o < cout; ++o)
        dots[static_cast<size_t>(o)] +=
            n.grad[i * cout + o] * vn->value[i * cout + o] / norms[static_cast<size_t>(o)];
    if (gn->requires_grad) {
      gn->EnsureGrad();
      for (int64_t o = 0; o < cout; ++o) gn->grad[o] += dots[static_cast<size_t>(o)];
    }
    if (vn->requires_grad) {
      vn->EnsureGrad();
      for (int64_t i = 0; i < groups; ++i)
        for (int64_t o = 0; o < cout; ++o) {
          const double nrm = norms[static_cast<size_t>(o)];
          const double vhat = vn->value[i * cout + o] / nrm;
          vn->grad[i * cout + o] += gn->value[o] / nrm *
              (n.grad[i * cout + o] - dots[static_cast<size_t>(o)] * vhat);
        }
    }
  }));
}

Var Dropout(const Var& x, double p, RngStream* rng, bool enabled) {
  if (!enabled || p <= 0.0) return x;
  TTSAUG_CHECK(p < 1.0, ConfigError, "dropout probability must be < 1");
  TTSAUG_CHECK(rng != nullptr, ConfigError, "dropout needs an rng stream");
  const Tensor& v = x.value();
  std::vector<double> mask(static_cast<size_t>(v.size()));
  const double keep_scale = 1.0 / (1.0 - p);
  for (auto& m : mask) m = rng->Uniform() < p ? 0.0 : keep_scale;
  Tensor y(v.shape());
  for (int64_t i = 0; i < v.size(); ++i) y[i] = v[i] * mask[static_cast<size_t>(i)];
  NodePtr xn = x.node();
  return Var(MakeNode(std::move(y), {xn}, [xn, mask = std::move(mask)](Node& n) {
    if (!xn->requires_grad) return;
    xn->EnsureGrad();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      xn->grad[i] += n.grad[i] * mask[static_cast<size_t>(i)];
  }));
}

Var Detach(const Var& a) { return Var::Const(a.value()); }

}  // namespace ttsaug

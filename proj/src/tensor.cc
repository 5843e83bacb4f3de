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

#include "ttsaug/tensor.h"

#include <Eigen/Core>

#include <cmath>
#include <sstream>

namespace ttsaug {

namespace {
using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;
}  // namespace

Tensor::Tensor(std::vector<int64_t> shape) : shape_(std::move(shape)) {
  TTSAUG_CHECK(!shape_.empty() && shape_.size() <= 3, ShapeError,
               "tensor rank must be 1..3");
  int64_t n = 1;
  for (int64_t d : shape_) {
    TTSAUG_CHECK(d >= 0, ShapeError, "negative dimension");
    n *= d;
  }
  data_.assign(static_cast<size_t>(n), 0.0);
}

Tensor Tensor::Full(std::vector<int64_t> shape, double v) {
  Tensor t(std::move(shape));
  t.Fill(v);
  return t;
}

Tensor Tensor::FromVector(const std::vector<double>& v) {
  Tensor t({static_cast<int64_t>(v.size())});
  t.data_ = v;
  return t;
}

Tensor Tensor::RowMatrix(const std::vector<double>& v) {
  Tensor t({1, static_cast<int64_t>(v.size())});
  t.data_ = v;
  return t;
}

void Tensor::Fill(double v) {
  for (double& x : data_) x = v;
}

bool Tensor::AllFinite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::string Tensor::ShapeStr() const {
  std::ostringstream ss;
  ss << "[";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) ss << ",";
    ss << shape_[i];
  }
  ss << "]";
  return ss.str();
}

void MatMulInto(const Tensor& a, bool transpose_a, const Tensor& b,
                bool transpose_b, Tensor* c, bool accumulate) {
  TTSAUG_CHECK(a.ndim() == 2 && b.ndim() == 2 && c->ndim() == 2, ShapeError,
               "MatMulInto expects 2-D tensors");
  const int64_t am = transpose_a ? a.dim(1) : a.dim(0);
  const int64_t ak = transpose_a ? a.dim(0) : a.dim(1);
  const int64_t bk = transpose_b ? b.dim(1) : b.dim(0);
  const int64_t bn = transpose_b ? b.dim(0) : b.dim(1);
  TTSAUG_CHECK(ak == bk, ShapeError,
               "MatMul inner dims mismatch: " + a.ShapeStr() + " vs " + b.ShapeStr());
  TTSAUG_CHECK(c->dim(0) == am && c->dim(1) == bn, ShapeError, "MatMul output shape");
  ECMap ma(a.data(), a.dim(0), a.dim(1));
  ECMap mb(b.data(), b.dim(0), b.dim(1));
  EMap mc(c->data(), am, bn);
  if (!transpose_a && !transpose_b) {
    if (accumulate) mc.noalias() += ma * mb; else mc.noalias() = ma * mb;
  } else if (transpose_a && !transpose_b) {
    if (accumulate) mc.noalias() += ma.transpose() * mb; else mc.noalias() = ma.transpose() * mb;
  } else if (!transpose_a && transpose_b) {
    if (accumulate) mc.noalias() += ma * mb.transpose(); else mc.noalias() = ma * mb.transpose();
  } else {
    if (accumulate) mc.noalias() += ma.transpose() * mb.transpose();
    else mc.noalias() = ma.transpose() * mb.transpose();
  }
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  Tensor c({a.dim(0), b.dim(1)});
  MatMulInto(a, false, b, false, &c, false);
  return c;
}

}  // namespace ttsaug

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

#ifndef TTSAUG_TENSOR_H_
#define TTSAUG_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ttsaug/common.h"

namespace ttsaug {

// Dense row-major tensor of doubles, up to 3 dimensions. All model math in
// this project runs in double precision; 32-bit floats appear only at the
// feature-cache I/O boundary.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);
  Tensor(std::initializer_list<int64_t> shape)
      : Tensor(std::vector<int64_t>(shape)) {}

  static Tensor Zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }
  static Tensor Full(std::vector<int64_t> shape, double v);
  static Tensor FromVector(const std::vector<double>& v);
  static Tensor RowMatrix(const std::vector<double>& v);  // [1, n]

  bool empty() const { return data_.empty(); }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  const std::vector<int64_t>& shape() const { return shape_; }
  std::string ShapeStr() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec() { return data_; }
  const std::vector<double>& vec() const { return data_; }

  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }
  double& at(int64_t i, int64_t j) { return data_[static_cast<size_t>(i * shape_[1] + j)]; }
  double at(int64_t i, int64_t j) const { return data_[static_cast<size_t>(i * shape_[1] + j)]; }
  double& at(int64_t i, int64_t j, int64_t k) {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  double at(int64_t i, int64_t j, int64_t k) const {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }

  void Fill(double v);
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  bool AllFinite() const;

  // Rows/cols of a 2-D tensor (a 1-D tensor counts as a single row).
  int64_t rows() const { return ndim() == 1 ? 1 : shape_[0]; }
  int64_t cols() const { return ndim() == 1 ? shape_[0] : shape_[ndim() == 2 ? 1 : 2]; }

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

// C = A x B for 2-D tensors; accumulates into *c when accumulate is set.
void MatMulInto(const Tensor& a, bool transpose_a, const Tensor& b,
                bool transpose_b, Tensor* c, bool accumulate);
Tensor MatMul(const Tensor& a, const Tensor& b);

}  // namespace ttsaug

#endif  // TTSAUG_TENSOR_H_

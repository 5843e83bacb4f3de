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

#ifndef TTSAUG_OPTIM_H_
#define TTSAUG_OPTIM_H_

#include <map>
#include <string>
#include <vector>

#include "ttsaug/nn.h"

namespace ttsaug {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip_norm = 0.0;  // 0 disables clipping
};

class Adam {
 public:
  Adam() = default;
  Adam(std::vector<NamedParam> params, AdamOptions opts);

  void ZeroGrad();
  void Step();
  double lr() const { return opts_.lr; }
  void set_lr(double lr) { opts_.lr = lr; }
  int64_t step_count() const { return t_; }
  const std::vector<NamedParam>& params() const { return params_; }

  // Optimizer state as named tensors for checkpointing.
  std::map<std::string, Tensor> SaveState() const;
  void LoadState(const std::map<std::string, Tensor>& state);

 private:
  std::vector<NamedParam> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamOptions opts_;
  int64_t t_ = 0;
};

}  // namespace ttsaug

#endif  // TTSAUG_OPTIM_H_

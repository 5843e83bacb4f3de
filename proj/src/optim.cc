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

#include "ttsaug/optim.h"

#include <cmath>

namespace ttsaug {

Adam::Adam(std::vector<NamedParam> params, AdamOptions opts)
    : params_(std::move(params)), opts_(opts) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.var.value().shape());
    v_.emplace_back(p.var.value().shape());
  }
}

void Adam::ZeroGrad() {
  for (auto& p : params_) p.var.grad().Fill(0.0);
}

void Adam::Step() {
  ++t_;
  double scale = 1.0;
  if (opts_.grad_clip_norm > 0.0) {
    double sq = 0.0;
    for (auto& p : params_) {
      const Tensor& g = p.var.grad();
      for (int64_t i = 0; i < g.size(); ++i) sq += g[i] * g[i];
    }
    const double norm = std::sqrt(sq);
    if (norm > opts_.grad_clip_norm) scale = opts_.grad_clip_norm / norm;
  }
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (size_t k = 0; k < params_.size(); ++k) {
    Tensor& w = params_[k].var.value();
    const Tensor& g = params_[k].var.grad();
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (int64_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] * scale;
      m[i] = opts_.beta1 * m[i] + (1.0 - opts_.beta1) * gi;
      v[i] = opts_.beta2 * v[i] + (1.0 - opts_.beta2) * gi * gi;
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      w[i] -= opts_.lr * mh / (std::sqrt(vh) + opts_.eps);
    }
  }
}

std::map<std::string, Tensor> Adam::SaveState() const {
  std::map<std::string, Tensor> st;
  for (size_t k = 0; k < params_.size(); ++k) {
    st["adam.m." + params_[k].name] = m_[k];
    st["adam.v." + params_[k].name] = v_[k];
  }
  st["adam.t"] = Tensor::FromVector({static_cast<double>(t_)});
  return st;
}

void Adam::LoadState(const std::map<std::string, Tensor>& state) {
  for (size_t k = 0; k < params_.size(); ++k) {
    auto im = state.find("adam.m." + params_[k].name);
    auto iv = state.find("adam.v." + params_[k].name);
    TTSAUG_CHECK(im != state.end() && iv != state.end(), IntegrityError,
                 "optimizer state missing for " + params_[k].name);
    TTSAUG_CHECK(im->second.SameShape(m_[k]), IntegrityError,
                 "optimizer state shape mismatch for " + params_[k].name);
    m_[k] = im->second;
    v_[k] = iv->second;
  }
  auto it = state.find("adam.t");
  TTSAUG_CHECK(it != state.end(), IntegrityError, "optimizer step counter missing");
  t_ = static_cast<int64_t>(it->second[0]);
}

}  // namespace ttsaug

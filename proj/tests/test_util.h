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

#ifndef TTSAUG_TESTS_TEST_UTIL_H_
#define TTSAUG_TESTS_TEST_UTIL_H_

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ttsaug/autograd.h"
#include "ttsaug/nn.h"
#include "ttsaug/rng.h"

namespace ttsaug::testutil {

// Central finite-difference check of d(loss)/d(param[index]) against the
// autograd value. loss_fn must rebuild the graph from current parameter
// values on every call. Returns the worst relative error over the probes.
struct GradProbe {
  std::string param;
  int64_t index;
};

inline double RelError(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

inline double CheckGradients(std::vector<NamedParam>& params,
                             const std::function<Var()>& loss_fn,
                             const std::vector<GradProbe>& probes,
                             double fd_eps = 1e-5) {
  for (auto& p : params) p.var.grad().Fill(0.0);
  Var loss = loss_fn();
  Backward(loss);
  double worst = 0.0;
  for (const auto& probe : probes) {
    NamedParam* target = nullptr;
    for (auto& p : params)
      if (p.name == probe.param) target = &p;
    if (!target) throw std::runtime_error("no such param: " + probe.param);
    const double analytic = target->var.grad()[probe.index];
    double& w = target->var.value()[probe.index];
    const double saved = w;
    w = saved + fd_eps;
    const double up = loss_fn().item();
    w = saved - fd_eps;
    const double down = loss_fn().item();
    w = saved;
    const double numeric = (up - down) / (2.0 * fd_eps);
    worst = std::max(worst, RelError(analytic, numeric));
  }
  return worst;
}

// Picks n probe points spread over all parameters, deterministic by seed.
inline std::vector<GradProbe> SampleProbes(const std::vector<NamedParam>& params,
                                           int n, uint64_t seed) {
  RngStream rng(seed);
  std::vector<GradProbe> probes;
  for (int i = 0; i < n; ++i) {
    const auto& p = params[static_cast<size_t>(rng.UniformInt(
        0, static_cast<int64_t>(params.size()) - 1))];
    probes.push_back({p.name, rng.UniformInt(0, p.var.value().size() - 1)});
  }
  return probes;
}

}  // namespace ttsaug::testutil

#endif  // TTSAUG_TESTS_TEST_UTIL_H_

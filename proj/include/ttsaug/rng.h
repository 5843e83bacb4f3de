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

#ifndef TTSAUG_RNG_H_
#define TTSAUG_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ttsaug/common.h"

namespace ttsaug {

// Deterministic random stream. Distribution code is written out here rather
// than taken from <random> so that values do not depend on the standard
// library implementation; reproducibility of manifests relies on it.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(Uniform() * static_cast<double>(hi - lo + 1));
  }

  // Box-Muller; one value per call, the pair partner is cached.
  double Gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = Uniform();
    double u2 = Uniform();
    while (u1 <= 1e-300) u1 = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  // Samples an index from unnormalized non-negative weights.
  int Categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    TTSAUG_CHECK(total > 0.0, DataError, "categorical weights sum to zero");
    double u = Uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  template <typename T>
  void Shuffle(std::vector<T>* v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

  std::string SerializeState() const {
    std::ostringstream ss;
    ss << engine_ << " " << (has_cached_ ? 1 : 0) << " " << cached_;
    return ss.str();
  }

  void DeserializeState(const std::string& s) {
    std::istringstream ss(s);
    int flag = 0;
    ss >> engine_ >> flag >> cached_;
    if (!ss) throw IntegrityError("bad rng state string");
    has_cached_ = (flag != 0);
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Derives an independent stream from a master seed and a purpose label, so
// that every consumer (corpus synthesis, model init, batch shuffling, ...)
// owns its own reproducible stream.
inline RngStream MakeStream(uint64_t seed, const std::string& name) {
  uint64_t h = Fnv1a(name, seed ^ 0x9e3779b97f4a7c15ull);
  // splitmix64 finalizer to spread the seed bits.
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  h = h ^ (h >> 31);
  return RngStream(h);
}

}  // namespace ttsaug

#endif  // TTSAUG_RNG_H_

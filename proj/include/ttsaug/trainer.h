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

#ifndef TTSAUG_TRAINER_H_
#define TTSAUG_TRAINER_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ttsaug/optim.h"
#include "ttsaug/rng.h"

namespace ttsaug {

struct TrainBudget {
  int64_t steps = 1000;
  int batch_size = 8;
  double lr = 1e-3;
  double grad_clip = 1.0;
  int64_t log_interval = 50;
  int64_t checkpoint_interval = 0;  // 0: only at the end (if a path is set)
};

// Seeded epoch shuffler with serializable position.
class DataOrder {
 public:
  DataOrder(int n, uint64_t seed);
  std::vector<int> NextBatch(int batch_size);
  std::string SaveState() const;
  void LoadState(const std::string& s);

 private:
  void Reshuffle();
  int n_ = 0;
  RngStream rng_;
  std::vector<int> perm_;
  size_t pos_ = 0;
};

// Shared optimization loop: data order, metric logging, CSV emission, and
// crash-safe checkpoints with exact resume (optimizer moments, RNG streams
// and data order are all restored).
class TrainLoop {
 public:
  // Runs one optimization step over the given item indices and returns the
  // metrics to log; must contain "loss".
  using StepFn = std::function<std::map<std::string, double>(
      const std::vector<int>& items, RngStream* rng)>;
  using ValidateFn = std::function<std::map<std::string, double>()>;

  struct Options {
    TrainBudget budget;
    int dataset_size = 1;
    uint64_t seed = 1;
    std::string checkpoint_path;           // "" disables
    std::string csv_path;                  // "" disables
    std::vector<std::string> csv_columns;  // after the leading "step"
    std::string config_echo;               // stored in checkpoints
  };

  TrainLoop(Options opts, StepFn step_fn, ValidateFn validate_fn = nullptr);

  void RegisterParams(const std::vector<NamedParam>& params);
  void RegisterOptimizer(const std::string& name, Adam* opt);
  // Extra RNG stream saved/restored with checkpoints (e.g. vocoder noise).
  void RegisterRng(const std::string& name, RngStream* rng);

  int64_t step() const { return step_; }
  // Runs from the current step to budget.steps.
  void Run();
  void SaveCheckpoint(const std::string& path) const;
  void LoadCheckpoint(const std::string& path);
  bool ResumeIfCheckpointExists();

  const std::vector<std::map<std::string, double>>& log_rows() const {
    return log_rows_;
  }

 private:
  void WriteCsv() const;

  Options opts_;
  StepFn step_fn_;
  ValidateFn validate_fn_;
  std::vector<NamedParam> params_;
  std::vector<std::pair<std::string, Adam*>> optimizers_;
  std::vector<std::pair<std::string, RngStream*>> extra_rngs_;
  DataOrder order_;
  RngStream rng_;
  int64_t step_ = 0;
  std::map<std::string, double> interval_sum_;
  int64_t interval_count_ = 0;
  std::vector<std::map<std::string, double>> log_rows_;
};

}  // namespace ttsaug

#endif  // TTSAUG_TRAINER_H_

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

#include "ttsaug/trainer.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ttsaug/serialize.h"

namespace ttsaug {

DataOrder::DataOrder(int n, uint64_t seed) : n_(n), rng_(seed) {
  TTSAUG_CHECK(n >= 1, DataError, "empty dataset");
  Reshuffle();
}

void DataOrder::Reshuffle() {
  perm_.resize(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) perm_[static_cast<size_t>(i)] = i;
  rng_.Shuffle(&perm_);
  pos_ = 0;
}

std::vector<int> DataOrder::NextBatch(int batch_size) {
  std::vector<int> batch;
  batch.reserve(static_cast<size_t>(batch_size));
  for (int i = 0; i < batch_size; ++i) {
    if (pos_ >= perm_.size()) Reshuffle();
    batch.push_back(perm_[pos_++]);
  }
  return batch;
}

std::string DataOrder::SaveState() const {
  std::ostringstream ss;
  ss << rng_.SerializeState() << '|' << pos_;
  for (int v : perm_) ss << ' ' << v;
  return ss.str();
}

void DataOrder::LoadState(const std::string& s) {
  const auto bar = s.find('|');
  TTSAUG_CHECK(bar != std::string::npos, IntegrityError, "bad data order state");
  rng_.DeserializeState(s.substr(0, bar));
  std::istringstream rest(s.substr(bar + 1));
  rest >> pos_;
  perm_.clear();
  int v;
  while (rest >> v) perm_.push_back(v);
  TTSAUG_CHECK(static_cast<int>(perm_.size()) == n_ && pos_ <= perm_.size(),
               IntegrityError, "data order state does not match dataset");
}

TrainLoop::TrainLoop(Options opts, StepFn step_fn, ValidateFn validate_fn)
    : opts_(std::move(opts)),
      step_fn_(std::move(step_fn)),
      validate_fn_(std::move(validate_fn)),
      order_(opts_.dataset_size, MakeStream(opts_.seed, "data_order").NextU64()),
      rng_(MakeStream(opts_.seed, "train_rng").NextU64()) {
  TTSAUG_CHECK(opts_.budget.log_interval >= 1, ConfigError,
               "log interval must be >= 1");
  if (opts_.budget.checkpoint_interval > 0) {
    TTSAUG_CHECK(opts_.budget.checkpoint_interval % opts_.budget.log_interval == 0,
                 ConfigError,
                 "checkpoint interval must be a multiple of the log interval");
  }
}

void TrainLoop::RegisterParams(const std::vector<NamedParam>& params) {
  params_.insert(params_.end(), params.begin(), params.end());
}

void TrainLoop::RegisterOptimizer(const std::string& name, Adam* opt) {
  optimizers_.emplace_back(name, opt);
}

void TrainLoop::RegisterRng(const std::string& name, RngStream* rng) {
  extra_rngs_.emplace_back(name, rng);
}

void TrainLoop::Run() {
  while (step_ < opts_.budget.steps) {
    const std::vector<int> batch = order_.NextBatch(opts_.budget.batch_size);
    std::map<std::string, double> metrics = step_fn_(batch, &rng_);
    auto it = metrics.find("loss");
    TTSAUG_CHECK(it != metrics.end(), ConfigError, "step metrics must report loss");
    TTSAUG_CHECK(std::isfinite(it->second), NumericError,
                 "training aborted: non-finite loss at step " +
                     std::to_string(step_ + 1));
    ++step_;
    for (const auto& [k, v] : metrics) interval_sum_[k] += v;
    ++interval_count_;

    if (step_ % opts_.budget.log_interval == 0 || step_ == opts_.budget.steps) {
      std::map<std::string, double> row;
      row["step"] = static_cast<double>(step_);
      for (const auto& [k, v] : interval_sum_)
        row[k] = v / static_cast<double>(interval_count_);
      interval_sum_.clear();
      interval_count_ = 0;
      if (validate_fn_) {
        for (const auto& [k, v] : validate_fn_()) row[k] = v;
      }
      log_rows_.push_back(std::move(row));
      if (!opts_.csv_path.empty()) WriteCsv();
      if (!opts_.checkpoint_path.empty() &&
          opts_.budget.checkpoint_interval > 0 &&
          step_ % opts_.budget.checkpoint_interval == 0) {
        SaveCheckpoint(opts_.checkpoint_path);
      }
    }
  }
  if (!opts_.checkpoint_path.empty()) SaveCheckpoint(opts_.checkpoint_path);
}

void TrainLoop::WriteCsv() const {
  std::ostringstream out;
  out << "step";
  for (const auto& c : opts_.csv_columns) out << ',' << c;
  out << '\n';
  char buf[64];
  for (const auto& row : log_rows_) {
    out << static_cast<int64_t>(row.at("step"));
    for (const auto& c : opts_.csv_columns) {
      auto it = row.find(c);
      if (it == row.end()) {
        out << ",";
      } else {
        std::snprintf(buf, sizeof(buf), "%.8f", it->second);
        out << ',' << buf;
      }
    }
    out << '\n';
  }
  AtomicWriteFile(opts_.csv_path, out.str());
}

void TrainLoop::SaveCheckpoint(const std::string& path) const {
  Archive ar;
  for (const auto& p : params_) ar.tensors["param." + p.name] = p.var.value();
  for (const auto& [name, opt] : optimizers_) {
    for (const auto& [k, t] : opt->SaveState()) ar.tensors["opt." + name + "." + k] = t;
  }
  ar.tensors["step"] = Tensor::FromVector({static_cast<double>(step_)});
  ar.strings["rng"] = rng_.SerializeState();
  ar.strings["data_order"] = order_.SaveState();
  ar.strings["config"] = opts_.config_echo;
  for (const auto& [name, rng] : extra_rngs_)
    ar.strings["rng." + name] = rng->SerializeState();
  SaveArchive(path, ar);
}

void TrainLoop::LoadCheckpoint(const std::string& path) {
  Archive ar = LoadArchive(path);
  for (auto& p : params_) {
    auto it = ar.tensors.find("param." + p.name);
    TTSAUG_CHECK(it != ar.tensors.end(), IntegrityError,
                 "checkpoint missing parameter " + p.name);
    TTSAUG_CHECK(it->second.SameShape(p.var.value()), IntegrityError,
                 "checkpoint shape mismatch for " + p.name);
    p.var.value() = it->second;
  }
  for (auto& [name, opt] : optimizers_) {
    std::map<std::string, Tensor> st;
    const std::string prefix = "opt." + name + ".";
    for (const auto& [k, t] : ar.tensors) {
      if (k.rfind(prefix, 0) == 0) st[k.substr(prefix.size())] = t;
    }
    opt->LoadState(st);
  }
  auto it = ar.tensors.find("step");
  TTSAUG_CHECK(it != ar.tensors.end(), IntegrityError, "checkpoint missing step");
  step_ = static_cast<int64_t>(it->second[0]);
  rng_.DeserializeState(ar.strings.at("rng"));
  order_.LoadState(ar.strings.at("data_order"));
  for (auto& [name, rng] : extra_rngs_) {
    auto is = ar.strings.find("rng." + name);
    TTSAUG_CHECK(is != ar.strings.end(), IntegrityError,
                 "checkpoint missing rng stream " + name);
    rng->DeserializeState(is->second);
  }
}

bool TrainLoop::ResumeIfCheckpointExists() {
  if (opts_.checkpoint_path.empty() || !FileExists(opts_.checkpoint_path))
    return false;
  LoadCheckpoint(opts_.checkpoint_path);
  return true;
}

}  // namespace ttsaug

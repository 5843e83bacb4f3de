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

#include "ttsaug/corpus_builder.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ttsaug/svg_plot.h"

namespace ttsaug {

PhonemeInventory PhonemeInventory::Create(
    const std::vector<std::pair<std::string, PhonemeClass>>& entries) {
  TTSAUG_CHECK(!entries.empty(), DataError, "phoneme inventory is empty");
  PhonemeInventory inv;
  for (const auto& [sym, cls] : entries) {
    TTSAUG_CHECK(inv.index_.find(sym) == inv.index_.end(), DataError,
                 "duplicate phoneme symbol: " + sym);
    const int idx = static_cast<int>(inv.symbols_.size());
    inv.index_[sym] = idx;
    inv.symbols_.push_back(sym);
    inv.classes_.push_back(cls);
    if (cls == PhonemeClass::kSilence) {
      TTSAUG_CHECK(inv.silence_index_ < 0, DataError,
                   "inventory has more than one silence symbol");
      inv.silence_index_ = idx;
    }
  }
  TTSAUG_CHECK(inv.silence_index_ >= 0, DataError,
               "inventory needs exactly one silence symbol");
  return inv;
}

int PhonemeInventory::IndexOf(const std::string& symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? -1 : it->second;
}

Lexicon LoadLexicon(const std::string& path, const PhonemeInventory& inventory) {
  Lexicon lex;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    TTSAUG_CHECK(tab != std::string::npos, DataError,
                 "lexicon line " + std::to_string(lineno) + " has no tab");
    const std::string token = line.substr(0, tab);
    std::vector<int> phones;
    std::istringstream rest(line.substr(tab + 1));
    std::string sym;
    while (rest >> sym) {
      const int idx = inventory.IndexOf(sym);
      TTSAUG_CHECK(idx >= 0, DataError,
                   "lexicon symbol not in inventory: " + sym);
      phones.push_back(idx);
    }
    TTSAUG_CHECK(!phones.empty(), DataError,
                 "lexicon entry with no phonemes: " + token);
    lex[token] = std::move(phones);
  }
  return lex;
}

void SaveLexicon(const std::string& path, const Lexicon& lexicon,
                 const PhonemeInventory& inventory) {
  std::ostringstream out;
  for (const auto& [token, phones] : lexicon) {
    out << token << '\t';
    for (size_t i = 0; i < phones.size(); ++i) {
      if (i) out << ' ';
      out << inventory.symbol(phones[i]);
    }
    out << '\n';
  }
  AtomicWriteFile(path, out.str());
}

std::vector<int> Phonemize(const std::string& text, const Lexicon& lexicon,
                           const PhonemeInventory& inventory,
                           const PhonemizerOptions& opts) {
  std::vector<int> out;
  if (opts.add_boundary_silence) out.push_back(inventory.silence_index());
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    auto it = lexicon.find(token);
    if (it == lexicon.end()) {
      switch (opts.oov_policy) {
        case OovPolicy::kError:
          throw DataError("out-of-vocabulary token: '" + token + "'");
        case OovPolicy::kSkip:
          continue;
        case OovPolicy::kSilenceSubstitute:
          out.push_back(inventory.silence_index());
          continue;
      }
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  if (opts.add_boundary_silence) out.push_back(inventory.silence_index());
  return out;
}

PhonemeHistogram HistogramFromCounts(std::vector<int64_t> counts) {
  PhonemeHistogram h;
  h.counts = std::move(counts);
  h.total = 0;
  for (int64_t c : h.counts) {
    TTSAUG_CHECK(c >= 0, DataError, "negative phoneme count");
    h.total += c;
  }
  TTSAUG_CHECK(h.total > 0, DataError, "empty corpus: total phoneme count is zero");
  h.normalized.resize(h.counts.size());
  for (size_t i = 0; i < h.counts.size(); ++i)
    h.normalized[i] =
        static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
  return h;
}

PhonemeHistogram ComputeHistogram(const std::vector<ScriptRecord>& records,
                                  const PhonemeInventory& inventory) {
  TTSAUG_CHECK(!records.empty(), DataError, "empty corpus: no script records");
  std::vector<int64_t> counts(static_cast<size_t>(inventory.size()), 0);
  for (const auto& r : records) {
    for (int p : r.phonemes) {
      TTSAUG_CHECK(p >= 0 && p < inventory.size(), DataError,
                   "phoneme index out of range in record " + r.id);
      ++counts[static_cast<size_t>(p)];
    }
  }
  return HistogramFromCounts(std::move(counts));
}

double KlDivergence(const PhonemeHistogram& p, const PhonemeHistogram& q,
                    double epsilon) {
  TTSAUG_CHECK(p.normalized.size() == q.normalized.size(), ShapeError,
               "histograms over different inventories");
  TTSAUG_CHECK(epsilon > 0.0, ConfigError, "smoothing epsilon must be > 0");
  const double k = static_cast<double>(p.normalized.size());
  const double z = 1.0 + k * epsilon;
  double kl = 0.0;
  for (size_t i = 0; i < p.normalized.size(); ++i) {
    const double pi = (p.normalized[i] + epsilon) / z;
    const double qi = (q.normalized[i] + epsilon) / z;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

namespace {

double KlFromCounts(const std::vector<int64_t>& counts, int64_t total,
                    const PhonemeHistogram& target, double epsilon) {
  const double k = static_cast<double>(counts.size());
  const double z = 1.0 + k * epsilon;
  double kl = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double pi =
        (static_cast<double>(counts[i]) / static_cast<double>(total) + epsilon) / z;
    const double qi = (target.normalized[i] + epsilon) / z;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

SelectionResult SelectScriptsExact(const std::vector<ScriptRecord>& candidates,
                                   const PhonemeHistogram& target, int64_t budget,
                                   const SelectOptions& opts) {
  const size_t n = candidates.size();
  const size_t dims = target.normalized.size();
  std::vector<int64_t> sizes(n);
  std::vector<std::vector<int64_t>> cand_counts(n,
                                                std::vector<int64_t>(dims, 0));
  for (size_t i = 0; i < n; ++i) {
    for (int p : candidates[i].phonemes) ++cand_counts[i][static_cast<size_t>(p)];
    sizes[i] = static_cast<int64_t>(candidates[i].phonemes.size());
  }
  double best_kl = 1e300;
  uint32_t best_mask = 0;
  bool found = false;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    int64_t total = 0;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) total += sizes[i];
    if (total > budget || total == 0) continue;
    std::vector<int64_t> counts(dims, 0);
    for (size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      for (size_t d = 0; d < dims; ++d) counts[d] += cand_counts[i][d];
    }
    const double kl = KlFromCounts(counts, total, target, opts.epsilon);
    if (!found || kl < best_kl - 1e-15 ||
        (std::abs(kl - best_kl) <= 1e-15 && mask < best_mask)) {
      best_kl = kl;
      best_mask = mask;
      found = true;
    }
  }
  SelectionResult result;
  if (!found) {
    result.warning = true;
    result.warning_message = "no candidate fits within the phoneme budget";
    return result;
  }
  result.final_kl = best_kl;
  for (size_t i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) {
      result.selected.push_back(candidates[i]);
      result.total_phonemes += sizes[i];
    }
  }
  return result;
}

}  // namespace

SelectionResult SelectScriptsGreedy(const std::vector<ScriptRecord>& candidates,
                                    const PhonemeHistogram& target, int64_t budget,
                                    const SelectOptions& opts) {
  TTSAUG_CHECK(!candidates.empty(), DataError, "no candidate scripts");
  TTSAUG_CHECK(opts.ngram_order == 1, ConfigError,
               "phoneme n-gram matching beyond unigrams is not implemented");
  const size_t dims = target.normalized.size();
  const size_t n = candidates.size();
  std::vector<std::vector<int64_t>> cand_counts(n, std::vector<int64_t>(dims, 0));
  std::vector<int64_t> sizes(n);
  for (size_t i = 0; i < n; ++i) {
    for (int p : candidates[i].phonemes) {
      TTSAUG_CHECK(p >= 0 && static_cast<size_t>(p) < dims, DataError,
                   "candidate phoneme index out of range");
      ++cand_counts[i][static_cast<size_t>(p)];
    }
    sizes[i] = static_cast<int64_t>(candidates[i].phonemes.size());
  }

  std::vector<bool> used(n, false);
  std::vector<int64_t> counts(dims, 0);
  int64_t total = 0;
  double current_kl = 1e300;  // empty selection: any first pick improves
  SelectionResult result;
  while (true) {
    int best = -1;
    double best_kl = current_kl;
    for (size_t i = 0; i < n; ++i) {
      if (used[i] || sizes[i] == 0) continue;
      if (total + sizes[i] > budget) continue;
      std::vector<int64_t> trial = counts;
      for (size_t d = 0; d < dims; ++d) trial[d] += cand_counts[i][d];
      const double kl = KlFromCounts(trial, total + sizes[i], target, opts.epsilon);
      const bool better =
          kl < best_kl - 1e-15 ||
          (best >= 0 && std::abs(kl - best_kl) <= 1e-15 &&
           candidates[i].id < candidates[static_cast<size_t>(best)].id);
      if (better) {
        best_kl = kl;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;  // nothing fits or nothing reduces the divergence
    used[static_cast<size_t>(best)] = true;
    for (size_t d = 0; d < dims; ++d) counts[d] += cand_counts[static_cast<size_t>(best)][d];
    total += sizes[static_cast<size_t>(best)];
    current_kl = best_kl;
  }
  for (size_t i = 0; i < n; ++i)
    if (used[i]) result.selected.push_back(candidates[i]);
  result.total_phonemes = total;
  if (result.selected.empty()) {
    result.warning = true;
    result.warning_message = "no candidate fits within the phoneme budget";
  } else {
    result.final_kl = current_kl;
  }
  return result;
}

SelectionResult SelectScripts(const std::vector<ScriptRecord>& candidates,
                              const PhonemeHistogram& target, int64_t budget,
                              const SelectOptions& opts) {
  TTSAUG_CHECK(!candidates.empty(), DataError, "no candidate scripts");
  TTSAUG_CHECK(opts.ngram_order == 1, ConfigError,
               "phoneme n-gram matching beyond unigrams is not implemented");
  if (budget <= 0) {
    SelectionResult r;
    r.warning = true;
    r.warning_message = "phoneme budget is zero";
    return r;
  }
  // Small pools are solved exactly; the greedy heuristic can lock itself out
  // of the optimum when one strong candidate shadows a better pair.
  if (candidates.size() <= static_cast<size_t>(opts.exact_max_candidates) &&
      opts.exact_max_candidates <= 20) {
    return SelectScriptsExact(candidates, target, budget, opts);
  }
  return SelectScriptsGreedy(candidates, target, budget, opts);
}

std::vector<std::pair<std::string, std::string>> LoadScriptList(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    TTSAUG_CHECK(tab != std::string::npos, DataError,
                 "script line " + std::to_string(lineno) + " has no tab");
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

void SaveScriptList(const std::string& path,
                    const std::vector<ScriptRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) out << r.id << '\t' << r.text << '\n';
  AtomicWriteFile(path, out.str());
}

void WriteHistogramReport(const std::string& text_path,
                          const std::string& svg_path,
                          const std::vector<PhonemeHistogram>& histograms,
                          const std::vector<std::string>& labels,
                          const PhonemeInventory& inventory) {
  TTSAUG_CHECK(histograms.size() == labels.size() && !histograms.empty(),
               DataError, "histogram report inputs");
  std::ostringstream txt;
  txt << "symbol";
  for (const auto& l : labels) txt << '\t' << l;
  txt << '\n';
  char buf[32];
  for (int i = 0; i < inventory.size(); ++i) {
    txt << inventory.symbol(i);
    for (const auto& h : histograms) {
      std::snprintf(buf, sizeof(buf), "%.6f", h.normalized[static_cast<size_t>(i)]);
      txt << '\t' << buf;
    }
    txt << '\n';
  }
  AtomicWriteFile(text_path, txt.str());

  std::vector<std::vector<double>> values;
  for (const auto& h : histograms) values.push_back(h.normalized);
  WriteSvgBarChart(svg_path, "Normalized phoneme distribution",
                   inventory.symbols(), labels, values);
}

}  // namespace ttsaug

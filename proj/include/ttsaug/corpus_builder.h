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

#ifndef TTSAUG_CORPUS_BUILDER_H_
#define TTSAUG_CORPUS_BUILDER_H_

#include <map>
#include <string>
#include <vector>

#include "ttsaug/common.h"

namespace ttsaug {

// Phoneme classes; onset and coda consonants are distinct symbols.
enum class PhonemeClass { kSilence, kVowel, kOnset, kCoda };

class PhonemeInventory {
 public:
  static PhonemeInventory Create(
      const std::vector<std::pair<std::string, PhonemeClass>>& entries);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int i) const { return symbols_[static_cast<size_t>(i)]; }
  PhonemeClass phoneme_class(int i) const { return classes_[static_cast<size_t>(i)]; }
  int silence_index() const { return silence_index_; }
  // -1 when the symbol is not in the inventory.
  int IndexOf(const std::string& symbol) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::vector<PhonemeClass> classes_;
  std::map<std::string, int> index_;
  int silence_index_ = -1;
};

struct ScriptRecord {
  std::string id;
  std::string text;
  std::vector<int> phonemes;  // inventory indices
};

struct PhonemeHistogram {
  std::vector<int64_t> counts;
  std::vector<double> normalized;
  int64_t total = 0;
};

enum class OovPolicy { kError, kSkip, kSilenceSubstitute };

struct PhonemizerOptions {
  OovPolicy oov_policy = OovPolicy::kError;
  // Prepend/append the silence symbol, matching utterance-boundary pauses.
  bool add_boundary_silence = false;
};

// token -> phoneme indices
using Lexicon = std::map<std::string, std::vector<int>>;

// Lexicon file: one entry per line, "token<TAB>ph1 ph2 ...", UTF-8.
Lexicon LoadLexicon(const std::string& path, const PhonemeInventory& inventory);
void SaveLexicon(const std::string& path, const Lexicon& lexicon,
                 const PhonemeInventory& inventory);

std::vector<int> Phonemize(const std::string& text, const Lexicon& lexicon,
                           const PhonemeInventory& inventory,
                           const PhonemizerOptions& opts = {});

PhonemeHistogram HistogramFromCounts(std::vector<int64_t> counts);
PhonemeHistogram ComputeHistogram(const std::vector<ScriptRecord>& records,
                                  const PhonemeInventory& inventory);

// KL(p || q) after additive-epsilon smoothing and renormalization.
double KlDivergence(const PhonemeHistogram& p, const PhonemeHistogram& q,
                    double epsilon);

struct SelectOptions {
  double epsilon = 1e-6;
  // At or below this candidate count the selection is solved exactly by
  // subset enumeration; above it the greedy procedure is used.
  int exact_max_candidates = 12;
  // Config hook for matching phoneme n-grams; only unigrams are implemented.
  int ngram_order = 1;
};

struct SelectionResult {
  std::vector<ScriptRecord> selected;
  double final_kl = 0.0;
  int64_t total_phonemes = 0;
  bool warning = false;
  std::string warning_message;
};

// Picks a subset of candidates whose phoneme histogram best matches target
// without exceeding budget total phonemes.
SelectionResult SelectScripts(const std::vector<ScriptRecord>& candidates,
                              const PhonemeHistogram& target, int64_t budget,
                              const SelectOptions& opts = {});

// The plain greedy procedure: repeatedly add the candidate that most reduces
// the divergence, stop when nothing fits or nothing improves.
SelectionResult SelectScriptsGreedy(const std::vector<ScriptRecord>& candidates,
                                    const PhonemeHistogram& target, int64_t budget,
                                    const SelectOptions& opts = {});

// Script list file: one record per line, "id<TAB>text", UTF-8.
std::vector<std::pair<std::string, std::string>> LoadScriptList(
    const std::string& path);
void SaveScriptList(const std::string& path,
                    const std::vector<ScriptRecord>& records);

// Two-column text (symbol, normalized fraction) plus a bar-chart image.
void WriteHistogramReport(const std::string& text_path,
                          const std::string& svg_path,
                          const std::vector<PhonemeHistogram>& histograms,
                          const std::vector<std::string>& labels,
                          const PhonemeInventory& inventory);

}  // namespace ttsaug

#endif  // TTSAUG_CORPUS_BUILDER_H_

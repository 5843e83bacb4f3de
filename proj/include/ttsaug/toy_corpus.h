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

#ifndef TTSAUG_TOY_CORPUS_H_
#define TTSAUG_TOY_CORPUS_H_

#include <string>
#include <vector>

#include "ttsaug/corpus_builder.h"
#include "ttsaug/features.h"
#include "ttsaug/rng.h"

namespace ttsaug {

// Deterministic parametric speech-like corpus. Utterances are concatenations
// of per-phoneme waveform units (harmonic stacks with phoneme-specific
// formants for voiced units, resonated noise for unvoiced ones) with known
// frame-exact durations, which removes any forced-alignment step.
struct ToyCorpusConfig {
  int sample_rate = 8000;
  int hop_samples = 80;  // must equal FeatureConfig hop at this rate
  int min_words = 2;
  int max_words = 5;
  double p_onset = 0.85;
  double p_coda = 0.5;
  double f0_min = 120.0;
  double f0_max = 240.0;
  double peak = 0.6;

  void Validate() const;
};

struct ToyUtterance {
  std::string id;
  std::string text;
  std::vector<int> phonemes;   // inventory indices, silence at both ends
  std::vector<int> durations;  // frames; sum * hop == samples.size()
  std::vector<double> samples;
};

class ToyCorpusGenerator {
 public:
  explicit ToyCorpusGenerator(ToyCorpusConfig cfg);

  const ToyCorpusConfig& config() const { return cfg_; }
  const PhonemeInventory& inventory() const { return inventory_; }

  // Complete lexicon of every composable word.
  Lexicon FullLexicon() const;

  ToyUtterance GenerateUtterance(RngStream* rng, const std::string& id) const;
  // Text-only candidate script; perturb in [0,1] blends the class weights
  // towards uniform, imitating crawled text with a shifted distribution.
  ScriptRecord GenerateScript(RngStream* rng, const std::string& id,
                              double perturb) const;

  // Closed-form unigram distribution induced by the sampling process; the
  // oracle for histogram tests.
  std::vector<double> ExpectedPhonemeDistribution() const;

  // Renders audio for an externally chosen phoneme/duration sequence (used
  // only by tests that need custom alignments).
  std::vector<double> RenderAudio(const std::vector<int>& phonemes,
                                  const std::vector<int>& durations,
                                  RngStream* rng) const;

 private:
  struct Unit {
    std::string symbol;
    PhonemeClass cls;
    bool voiced = false;
    std::vector<double> formants;  // Hz
    double bandwidth = 150.0;
    double noise_center = 0.0;  // Hz, unvoiced units
    double noise_r = 0.9;
    double amplitude = 1.0;
    int min_frames = 3;
    int max_frames = 8;
    double weight = 1.0;
  };
  const Unit& unit(int phoneme) const { return units_[static_cast<size_t>(phoneme)]; }
  int SampleFromClass(PhonemeClass cls, RngStream* rng, double perturb) const;
  std::vector<std::pair<std::string, std::vector<int>>> SampleWords(
      RngStream* rng, double perturb) const;

  ToyCorpusConfig cfg_;
  PhonemeInventory inventory_;
  std::vector<Unit> units_;
  std::vector<int> vowel_ids_, onset_ids_, coda_ids_;
};

}  // namespace ttsaug

#endif  // TTSAUG_TOY_CORPUS_H_

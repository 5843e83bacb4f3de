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

#include "ttsaug/toy_corpus.h"

#include <algorithm>
#include <cmath>

namespace ttsaug {

void ToyCorpusConfig::Validate() const {
  TTSAUG_CHECK(sample_rate > 0 && hop_samples > 0, ConfigError,
               "toy corpus rates must be positive");
  TTSAUG_CHECK(min_words >= 1 && max_words >= min_words, ConfigError,
               "toy corpus word range invalid");
  TTSAUG_CHECK(p_onset >= 0 && p_onset <= 1 && p_coda >= 0 && p_coda <= 1,
               ConfigError, "toy corpus probabilities in [0,1]");
  TTSAUG_CHECK(f0_min > 0 && f0_max > f0_min, ConfigError, "toy corpus f0 band");
}

ToyCorpusGenerator::ToyCorpusGenerator(ToyCorpusConfig cfg) : cfg_(cfg) {
  cfg.Validate();
  // sil + 5 vowels + 5 onset consonants (lowercase) + 5 coda consonants
  // (uppercase). Stops are short noise bursts, fricatives longer noise,
  // nasals voiced with a dark spectrum.
  auto vowel = [](const std::string& s, double f1, double f2, double w) {
    Unit u;
    u.symbol = s;
    u.cls = PhonemeClass::kVowel;
    u.voiced = true;
    u.formants = {f1, f2};
    u.bandwidth = 180.0;
    u.amplitude = 1.0;
    u.min_frames = 7;
    u.max_frames = 14;
    u.weight = w;
    return u;
  };
  auto nasal = [](const std::string& s, PhonemeClass cls, double f1, double f2,
                  double w) {
    Unit u;
    u.symbol = s;
    u.cls = cls;
    u.voiced = true;
    u.formants = {f1, f2};
    u.bandwidth = 120.0;
    u.amplitude = 0.45;
    u.min_frames = 4;
    u.max_frames = 9;
    u.weight = w;
    return u;
  };
  auto stop = [](const std::string& s, PhonemeClass cls, double center, double w) {
    Unit u;
    u.symbol = s;
    u.cls = cls;
    u.voiced = false;
    u.noise_center = center;
    u.noise_r = 0.85;
    u.amplitude = 0.35;
    u.min_frames = 2;
    u.max_frames = 5;
    u.weight = w;
    return u;
  };
  auto fric = [](const std::string& s, PhonemeClass cls, double center, double w) {
    Unit u;
    u.symbol = s;
    u.cls = cls;
    u.voiced = false;
    u.noise_center = center;
    u.noise_r = 0.92;
    u.amplitude = 0.30;
    u.min_frames = 4;
    u.max_frames = 9;
    u.weight = w;
    return u;
  };

  Unit sil;
  sil.symbol = "sil";
  sil.cls = PhonemeClass::kSilence;
  sil.voiced = false;
  sil.amplitude = 0.0;
  sil.min_frames = 4;
  sil.max_frames = 9;
  units_.push_back(sil);
  units_.push_back(vowel("a", 700, 1200, 0.30));
  units_.push_back(vowel("e", 520, 1850, 0.25));
  units_.push_back(vowel("i", 320, 2300, 0.20));
  units_.push_back(vowel("o", 470, 950, 0.15));
  units_.push_back(vowel("u", 350, 720, 0.10));
  units_.push_back(stop("k", PhonemeClass::kOnset, 1500, 0.30));
  units_.push_back(fric("s", PhonemeClass::kOnset, 3200, 0.25));
  units_.push_back(stop("t", PhonemeClass::kOnset, 2800, 0.20));
  units_.push_back(nasal("n", PhonemeClass::kOnset, 300, 1400, 0.15));
  units_.push_back(nasal("m", PhonemeClass::kOnset, 260, 1050, 0.10));
  units_.push_back(stop("K", PhonemeClass::kCoda, 1500, 0.28));
  units_.push_back(fric("S", PhonemeClass::kCoda, 3200, 0.26));
  units_.push_back(stop("T", PhonemeClass::kCoda, 2800, 0.20));
  units_.push_back(nasal("N", PhonemeClass::kCoda, 300, 1400, 0.14));
  units_.push_back(nasal("M", PhonemeClass::kCoda, 260, 1050, 0.12));

  std::vector<std::pair<std::string, PhonemeClass>> entries;
  for (const auto& u : units_) entries.emplace_back(u.symbol, u.cls);
  inventory_ = PhonemeInventory::Create(entries);
  for (int i = 0; i < inventory_.size(); ++i) {
    switch (units_[static_cast<size_t>(i)].cls) {
      case PhonemeClass::kVowel: vowel_ids_.push_back(i); break;
      case PhonemeClass::kOnset: onset_ids_.push_back(i); break;
      case PhonemeClass::kCoda: coda_ids_.push_back(i); break;
      case PhonemeClass::kSilence: break;
    }
  }
}

Lexicon ToyCorpusGenerator::FullLexicon() const {
  Lexicon lex;
  auto add = [&](const std::vector<int>& phones) {
    std::string word;
    for (int p : phones) word += inventory_.symbol(p);
    lex[word] = phones;
  };
  for (int v : vowel_ids_) {
    add({v});
    for (int o : onset_ids_) {
      add({o, v});
      for (int c : coda_ids_) add({o, v, c});
    }
    for (int c : coda_ids_) add({v, c});
  }
  return lex;
}

int ToyCorpusGenerator::SampleFromClass(PhonemeClass cls, RngStream* rng,
                                        double perturb) const {
  const std::vector<int>* ids = nullptr;
  switch (cls) {
    case PhonemeClass::kVowel: ids = &vowel_ids_; break;
    case PhonemeClass::kOnset: ids = &onset_ids_; break;
    case PhonemeClass::kCoda: ids = &coda_ids_; break;
    case PhonemeClass::kSilence: return inventory_.silence_index();
  }
  std::vector<double> w(ids->size());
  const double uniform = 1.0 / static_cast<double>(ids->size());
  double total = 0.0;
  for (int id : *ids) total += unit(id).weight;
  for (size_t i = 0; i < ids->size(); ++i)
    w[i] = (1.0 - perturb) * unit((*ids)[i]).weight / total + perturb * uniform;
  return (*ids)[static_cast<size_t>(rng->Categorical(w))];
}

std::vector<std::pair<std::string, std::vector<int>>>
ToyCorpusGenerator::SampleWords(RngStream* rng, double perturb) const {
  const int words = static_cast<int>(rng->UniformInt(cfg_.min_words, cfg_.max_words));
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (int w = 0; w < words; ++w) {
    std::vector<int> phones;
    if (rng->Uniform() < cfg_.p_onset)
      phones.push_back(SampleFromClass(PhonemeClass::kOnset, rng, perturb));
    phones.push_back(SampleFromClass(PhonemeClass::kVowel, rng, perturb));
    if (rng->Uniform() < cfg_.p_coda)
      phones.push_back(SampleFromClass(PhonemeClass::kCoda, rng, perturb));
    std::string word;
    for (int p : phones) word += inventory_.symbol(p);
    out.emplace_back(std::move(word), std::move(phones));
  }
  return out;
}

std::vector<double> ToyCorpusGenerator::RenderAudio(
    const std::vector<int>& phonemes, const std::vector<int>& durations,
    RngStream* rng) const {
  TTSAUG_CHECK(phonemes.size() == durations.size(), AlignmentError,
               "phoneme/duration mismatch");
  int64_t total_frames = 0;
  for (int d : durations) {
    TTSAUG_CHECK(d >= 1, AlignmentError, "duration below 1 frame");
    total_frames += d;
  }
  const int hop = cfg_.hop_samples;
  const int64_t n = total_frames * hop;
  std::vector<double> x(static_cast<size_t>(n), 0.0);

  const double f0_base = rng->Uniform(cfg_.f0_min, cfg_.f0_max);
  const double sr = cfg_.sample_rate;
  const double nyquist = sr / 2.0;
  double phase = rng->Uniform(0.0, 2.0 * M_PI);

  int64_t frame0 = 0;
  int64_t sample_at = 0;
  for (size_t k = 0; k < phonemes.size(); ++k) {
    const Unit& u = unit(phonemes[k]);
    const int64_t seg = static_cast<int64_t>(durations[k]) * hop;
    const int64_t ramp = std::min<int64_t>(static_cast<int64_t>(0.002 * sr), seg / 4);
    if (u.cls == PhonemeClass::kSilence || u.amplitude == 0.0) {
      sample_at += seg;
      frame0 += durations[k];
      continue;
    }
    if (u.voiced) {
      for (int64_t i = 0; i < seg; ++i) {
        const int64_t t = sample_at + i;
        const int64_t frame = frame0 + i / hop;
        const double f0 =
            f0_base * (1.0 + 0.06 * std::sin(2.0 * M_PI * frame / 45.0)) *
            (1.0 - 0.12 * static_cast<double>(frame) / static_cast<double>(total_frames));
        phase += 2.0 * M_PI * f0 / sr;
        const int harmonics = std::max(1, static_cast<int>(nyquist * 0.92 / f0));
        double amp_norm = 0.0;
        double v = 0.0;
        for (int h = 1; h <= harmonics; ++h) {
          const double f = h * f0;
          double a = 0.02;
          for (double fm : u.formants) {
            const double d = (f - fm) / u.bandwidth;
            a += std::exp(-0.5 * d * d);
          }
          v += a * std::sin(h * phase);
          amp_norm += a * a;
        }
        v *= u.amplitude / std::sqrt(std::max(amp_norm * 0.5, 1e-12));
        double env = 1.0;
        if (i < ramp) env = static_cast<double>(i) / static_cast<double>(ramp);
        if (seg - 1 - i < ramp)
          env = std::min(env, static_cast<double>(seg - 1 - i) / static_cast<double>(ramp));
        x[static_cast<size_t>(t)] = v * env;
      }
    } else {
      // Resonated white noise, then RMS-normalized to the unit amplitude.
      const double omega = 2.0 * M_PI * u.noise_center / sr;
      const double r = u.noise_r;
      double y1 = 0.0, y2 = 0.0;
      double sq = 0.0;
      std::vector<double> seg_buf(static_cast<size_t>(seg));
      for (int64_t i = 0; i < seg; ++i) {
        const double noise = rng->Gaussian();
        const double y = noise + 2.0 * r * std::cos(omega) * y1 - r * r * y2;
        y2 = y1;
        y1 = y;
        seg_buf[static_cast<size_t>(i)] = y;
        sq += y * y;
      }
      const double rms = std::sqrt(std::max(sq / static_cast<double>(seg), 1e-12));
      for (int64_t i = 0; i < seg; ++i) {
        double env = 1.0;
        if (i < ramp) env = static_cast<double>(i) / static_cast<double>(ramp);
        if (seg - 1 - i < ramp)
          env = std::min(env, static_cast<double>(seg - 1 - i) / static_cast<double>(ramp));
        // Stops decay quickly after the burst.
        if (u.max_frames <= 5)
          env *= std::exp(-3.0 * static_cast<double>(i) / static_cast<double>(seg));
        x[static_cast<size_t>(sample_at + i)] = seg_buf[static_cast<size_t>(i)] / rms *
                                                u.amplitude * env;
      }
    }
    sample_at += seg;
    frame0 += durations[k];
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double g = cfg_.peak / peak;
    for (double& v : x) v *= g;
  }
  return x;
}

ToyUtterance ToyCorpusGenerator::GenerateUtterance(RngStream* rng,
                                                   const std::string& id) const {
  ToyUtterance utt;
  utt.id = id;
  const auto words = SampleWords(rng, 0.0);
  utt.phonemes.push_back(inventory_.silence_index());
  for (size_t w = 0; w < words.size(); ++w) {
    if (w) utt.text += ' ';
    utt.text += words[w].first;
    utt.phonemes.insert(utt.phonemes.end(), words[w].second.begin(),
                        words[w].second.end());
  }
  utt.phonemes.push_back(inventory_.silence_index());
  utt.durations.reserve(utt.phonemes.size());
  for (int p : utt.phonemes) {
    const Unit& u = unit(p);
    utt.durations.push_back(
        static_cast<int>(rng->UniformInt(u.min_frames, u.max_frames)));
  }
  utt.samples = RenderAudio(utt.phonemes, utt.durations, rng);
  return utt;
}

ScriptRecord ToyCorpusGenerator::GenerateScript(RngStream* rng,
                                                const std::string& id,
                                                double perturb) const {
  ScriptRecord rec;
  rec.id = id;
  const auto words = SampleWords(rng, perturb);
  rec.phonemes.push_back(inventory_.silence_index());
  for (size_t w = 0; w < words.size(); ++w) {
    if (w) rec.text += ' ';
    rec.text += words[w].first;
    rec.phonemes.insert(rec.phonemes.end(), words[w].second.begin(),
                        words[w].second.end());
  }
  rec.phonemes.push_back(inventory_.silence_index());
  return rec;
}

std::vector<double> ToyCorpusGenerator::ExpectedPhonemeDistribution() const {
  std::vector<double> counts(static_cast<size_t>(inventory_.size()), 0.0);
  const double ew = 0.5 * (cfg_.min_words + cfg_.max_words);
  counts[static_cast<size_t>(inventory_.silence_index())] = 2.0;
  auto class_total = [&](const std::vector<int>& ids) {
    double t = 0.0;
    for (int id : ids) t += unit(id).weight;
    return t;
  };
  const double vt = class_total(vowel_ids_);
  const double ot = class_total(onset_ids_);
  const double ct = class_total(coda_ids_);
  for (int id : vowel_ids_)
    counts[static_cast<size_t>(id)] = ew * unit(id).weight / vt;
  for (int id : onset_ids_)
    counts[static_cast<size_t>(id)] = ew * cfg_.p_onset * unit(id).weight / ot;
  for (int id : coda_ids_)
    counts[static_cast<size_t>(id)] = ew * cfg_.p_coda * unit(id).weight / ct;
  double total = 0.0;
  for (double c : counts) total += c;
  for (double& c : counts) c /= total;
  return counts;
}

}  // namespace ttsaug

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

#ifndef TTSAUG_MANIFEST_H_
#define TTSAUG_MANIFEST_H_

#include <string>
#include <vector>

#include "ttsaug/corpus_builder.h"

namespace ttsaug {

struct ManifestEntry {
  std::string id;
  std::string text;
  std::vector<std::string> phonemes;  // symbols
  std::vector<int> durations;         // frames
  std::string wav_path;
  std::string feature_path;
  enum class Origin { kRecorded, kSynthetic } origin = Origin::kRecorded;

  int64_t TotalFrames() const;
};

// Line-delimited text records:
// id<TAB>text<TAB>phonemes<TAB>durations<TAB>wav<TAB>features<TAB>origin
struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  void Validate() const;  // unique ids, durations >= 1, non-empty phonemes
  void Save(const std::string& path) const;
  static CorpusManifest Load(const std::string& path);
  uint64_t ContentHash() const;
  int64_t TotalPhonemes() const;
  std::vector<ScriptRecord> ToScriptRecords(const PhonemeInventory& inv) const;
};

}  // namespace ttsaug

#endif  // TTSAUG_MANIFEST_H_

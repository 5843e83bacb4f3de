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

#include "ttsaug/manifest.h"

#include <set>
#include <sstream>

namespace ttsaug {

int64_t ManifestEntry::TotalFrames() const {
  int64_t total = 0;
  for (int d : durations) total += d;
  return total;
}

void CorpusManifest::Validate() const {
  std::set<std::string> ids;
  for (const auto& e : entries) {
    TTSAUG_CHECK(!e.id.empty(), DataError, "manifest entry with empty id");
    TTSAUG_CHECK(ids.insert(e.id).second, DataError,
                 "duplicate manifest id: " + e.id);
    TTSAUG_CHECK(!e.phonemes.empty(), DataError,
                 "manifest entry with no phonemes: " + e.id);
    TTSAUG_CHECK(e.phonemes.size() == e.durations.size(), AlignmentError,
                 "phoneme/duration count mismatch in " + e.id);
    for (int d : e.durations)
      TTSAUG_CHECK(d >= 1, AlignmentError, "duration below 1 frame in " + e.id);
  }
}

namespace {

std::string JoinInts(const std::vector<int>& v) {
  std::ostringstream ss;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) ss << ' ';
    ss << v[i];
  }
  return ss.str();
}

std::string JoinStrings(const std::vector<std::string>& v) {
  std::ostringstream ss;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) ss << ' ';
    ss << v[i];
  }
  return ss.str();
}

}  // namespace

void CorpusManifest::Save(const std::string& path) const {
  Validate();
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.id << '\t' << e.text << '\t' << JoinStrings(e.phonemes) << '\t'
        << JoinInts(e.durations) << '\t' << e.wav_path << '\t' << e.feature_path
        << '\t'
        << (e.origin == ManifestEntry::Origin::kRecorded ? "recorded" : "synthetic")
        << '\n';
  }
  AtomicWriteFile(path, out.str());
}

CorpusManifest CorpusManifest::Load(const std::string& path) {
  CorpusManifest m;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cols = SplitString(line, '\t');
    TTSAUG_CHECK(cols.size() == 7, DataError,
                 "manifest line " + std::to_string(lineno) + " needs 7 columns");
    ManifestEntry e;
    e.id = cols[0];
    e.text = cols[1];
    {
      std::istringstream ps(cols[2]);
      std::string sym;
      while (ps >> sym) e.phonemes.push_back(sym);
    }
    {
      std::istringstream ds(cols[3]);
      int d;
      while (ds >> d) e.durations.push_back(d);
    }
    e.wav_path = cols[4];
    e.feature_path = cols[5];
    if (cols[6] == "recorded") {
      e.origin = ManifestEntry::Origin::kRecorded;
    } else if (cols[6] == "synthetic") {
      e.origin = ManifestEntry::Origin::kSynthetic;
    } else {
      throw DataError("unknown origin tag: " + cols[6]);
    }
    m.entries.push_back(std::move(e));
  }
  m.Validate();
  return m;
}

uint64_t CorpusManifest::ContentHash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& e : entries) {
    h = Fnv1a(e.id, h);
    h = Fnv1a(e.text, h);
    h = Fnv1a(JoinStrings(e.phonemes), h);
    h = Fnv1a(JoinInts(e.durations), h);
    h = Fnv1a(e.origin == ManifestEntry::Origin::kRecorded ? "r" : "s", h);
  }
  return h;
}

int64_t CorpusManifest::TotalPhonemes() const {
  int64_t total = 0;
  for (const auto& e : entries) total += static_cast<int64_t>(e.phonemes.size());
  return total;
}

std::vector<ScriptRecord> CorpusManifest::ToScriptRecords(
    const PhonemeInventory& inv) const {
  std::vector<ScriptRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    ScriptRecord r;
    r.id = e.id;
    r.text = e.text;
    for (const auto& sym : e.phonemes) {
      const int idx = inv.IndexOf(sym);
      TTSAUG_CHECK(idx >= 0, DataError,
                   "manifest phoneme not in inventory: " + sym);
      r.phonemes.push_back(idx);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ttsaug

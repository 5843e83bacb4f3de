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

#include "ttsaug/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ttsaug/common.h"

namespace ttsaug {

namespace {

void PutU32(std::ofstream& f, uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); }
void PutU16(std::ofstream& f, uint16_t v) { f.write(reinterpret_cast<char*>(&v), 2); }

}  // namespace

void WriteWav(const std::string& path, const std::vector<double>& samples,
              int sample_rate) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write wav: " + path);
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  f.write("RIFF", 4);
  PutU32(f, 36 + data_bytes);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  PutU32(f, 16);
  PutU16(f, 1);  // PCM
  PutU16(f, 1);  // mono
  PutU32(f, static_cast<uint32_t>(sample_rate));
  PutU32(f, static_cast<uint32_t>(sample_rate * 2));
  PutU16(f, 2);
  PutU16(f, 16);
  f.write("data", 4);
  PutU32(f, data_bytes);
  for (double s : samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<int16_t>(std::lrint(clipped * 32767.0));
    f.write(reinterpret_cast<const char*>(&q), 2);
  }
}

std::vector<double> ReadWav(const std::string& path, int* sample_rate) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open wav: " + path);
  char tag[4];
  uint32_t riff_size = 0;
  f.read(tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw DataError("not a wav file: " + path);
  f.read(reinterpret_cast<char*>(&riff_size), 4);
  f.read(tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw DataError("not a wav file: " + path);

  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  std::vector<double> samples;
  bool got_fmt = false, got_data = false;
  while (f.read(tag, 4)) {
    uint32_t chunk_size = 0;
    f.read(reinterpret_cast<char*>(&chunk_size), 4);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t fmt = 0, block = 0;
      uint32_t byte_rate = 0;
      f.read(reinterpret_cast<char*>(&fmt), 2);
      f.read(reinterpret_cast<char*>(&channels), 2);
      f.read(reinterpret_cast<char*>(&rate), 4);
      f.read(reinterpret_cast<char*>(&byte_rate), 4);
      f.read(reinterpret_cast<char*>(&block), 2);
      f.read(reinterpret_cast<char*>(&bits), 2);
      if (fmt != 1 || channels != 1 || bits != 16)
        throw DataError("expected 16-bit PCM mono wav: " + path);
      f.seekg(chunk_size - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      const size_t n = chunk_size / 2;
      samples.resize(n);
      std::vector<int16_t> raw(n);
      f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(chunk_size));
      for (size_t i = 0; i < n; ++i) samples[i] = static_cast<double>(raw[i]) / 32767.0;
      got_data = true;
    } else {
      f.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!got_fmt || !got_data) throw DataError("incomplete wav file: " + path);
  if (sample_rate) *sample_rate = static_cast<int>(rate);
  return samples;
}

}  // namespace ttsaug

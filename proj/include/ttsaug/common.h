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

#ifndef TTSAUG_COMMON_H_
#define TTSAUG_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttsaug {

// Error taxonomy. Every throwing path in the library uses one of these so
// callers and tests can distinguish contract violations from data problems.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& msg)
      : Error("alignment error: " + msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg)
      : Error("config error: " + msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error("data error: " + msg) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg)
      : Error("numeric error: " + msg) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& msg)
      : Error("integrity error: " + msg) {}
};

class DependencyError : public Error {
 public:
  explicit DependencyError(const std::string& msg)
      : Error("dependency error: " + msg) {}
};

#define TTSAUG_CHECK(cond, etype, msg)    \
  do {                                    \
    if (!(cond)) throw ::ttsaug::etype(msg); \
  } while (0)

// FNV-1a, used for content hashes of manifests and reports.
inline uint64_t Fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t Fnv1a(const std::string& s, uint64_t h = 0xcbf29ce484222325ull) {
  return Fnv1a(s.data(), s.size(), h);
}

std::vector<std::string> SplitString(const std::string& s, char delim);
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);
// Writes to path + ".tmp" then renames, so readers never see partial files.
void AtomicWriteFile(const std::string& path, const std::string& content);
bool FileExists(const std::string& path);
void MakeDirs(const std::string& path);
uint64_t HashFile(const std::string& path);

}  // namespace ttsaug

#endif  // TTSAUG_COMMON_H_

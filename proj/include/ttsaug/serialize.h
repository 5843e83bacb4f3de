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

#ifndef TTSAUG_SERIALIZE_H_
#define TTSAUG_SERIALIZE_H_

#include <map>
#include <string>

#include "ttsaug/tensor.h"

namespace ttsaug {

// Checkpoint payload: named tensors plus named strings (config echo, RNG
// states). Files carry a CRC32 so truncation or corruption is detected on
// load rather than producing silently wrong models.
struct Archive {
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> strings;
};

// Atomic write (temp file then rename).
void SaveArchive(const std::string& path, const Archive& ar);
Archive LoadArchive(const std::string& path);  // throws IntegrityError

}  // namespace ttsaug

#endif  // TTSAUG_SERIALIZE_H_

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

#ifndef TTSAUG_WAV_IO_H_
#define TTSAUG_WAV_IO_H_

#include <string>
#include <vector>

namespace ttsaug {

// 16-bit PCM mono WAV. Samples are doubles in [-1, 1]; writing clips.
void WriteWav(const std::string& path, const std::vector<double>& samples,
              int sample_rate);
std::vector<double> ReadWav(const std::string& path, int* sample_rate);

}  // namespace ttsaug

#endif  // TTSAUG_WAV_IO_H_

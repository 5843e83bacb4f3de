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

#include "ttsaug/serialize.h"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "ttsaug/common.h"

namespace ttsaug {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'S', 'B'};
constexpr uint32_t kVersion = 1;

void PutU32(std::string* s, uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  s->append(b, 4);
}

void PutU64(std::string* s, uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  s->append(b, 8);
}

void PutString(std::string* s, const std::string& v) {
  PutU32(s, static_cast<uint32_t>(v.size()));
  s->append(v);
}

class Reader {
 public:
  Reader(const std::string& buf, size_t pos) : buf_(buf), pos_(pos) {}
  uint32_t GetU32() {
    Check(4);
    uint32_t v;
    std::memcpy(&v, buf_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }
  uint64_t GetU64() {
    Check(8);
    uint64_t v;
    std::memcpy(&v, buf_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }
  std::string GetString() {
    const uint32_t n = GetU32();
    Check(n);
    std::string v = buf_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  void GetDoubles(double* dst, size_t n) {
    Check(n * 8);
    std::memcpy(dst, buf_.data() + pos_, n * 8);
    pos_ += n * 8;
  }
  size_t pos() const { return pos_; }

 private:
  void Check(size_t n) {
    if (pos_ + n > buf_.size()) throw IntegrityError("archive truncated");
  }
  const std::string& buf_;
  size_t pos_;
};

}  // namespace

void SaveArchive(const std::string& path, const Archive& ar) {
  std::string payload;
  PutU32(&payload, static_cast<uint32_t>(ar.tensors.size()));
  for (const auto& [name, t] : ar.tensors) {
    PutString(&payload, name);
    PutU32(&payload, static_cast<uint32_t>(t.ndim()));
    for (int i = 0; i < t.ndim(); ++i) PutU64(&payload, static_cast<uint64_t>(t.dim(i)));
    const size_t bytes = static_cast<size_t>(t.size()) * 8;
    const size_t off = payload.size();
    payload.resize(off + bytes);
    std::memcpy(payload.data() + off, t.data(), bytes);
  }
  PutU32(&payload, static_cast<uint32_t>(ar.strings.size()));
  for (const auto& [name, s] : ar.strings) {
    PutString(&payload, name);
    PutString(&payload, s);
  }

  std::string out;
  out.append(kMagic, 4);
  PutU32(&out, kVersion);
  PutU64(&out, payload.size());
  out += payload;
  const auto crc = static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
            static_cast<uInt>(payload.size())));
  PutU32(&out, crc);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw DataError("cannot write checkpoint: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
  }
  std::filesystem::rename(tmp, path);
}

Archive LoadArchive(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 20 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw IntegrityError("not a checkpoint file: " + path);
  Reader header(buf, 4);
  const uint32_t version = header.GetU32();
  if (version != kVersion) throw IntegrityError("unsupported checkpoint version");
  const uint64_t payload_size = header.GetU64();
  const size_t payload_off = header.pos();
  if (payload_off + payload_size + 4 > buf.size())
    throw IntegrityError("checkpoint truncated: " + path);
  uint32_t stored_crc;
  std::memcpy(&stored_crc, buf.data() + payload_off + payload_size, 4);
  const auto crc = static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(buf.data() + payload_off),
            static_cast<uInt>(payload_size)));
  if (crc != stored_crc) throw IntegrityError("checkpoint crc mismatch: " + path);

  Archive ar;
  Reader r(buf, payload_off);
  const uint32_t n_tensors = r.GetU32();
  for (uint32_t i = 0; i < n_tensors; ++i) {
    const std::string name = r.GetString();
    const uint32_t ndim = r.GetU32();
    if (ndim < 1 || ndim > 3) throw IntegrityError("bad tensor rank in archive");
    std::vector<int64_t> shape(ndim);
    for (uint32_t d = 0; d < ndim; ++d) shape[d] = static_cast<int64_t>(r.GetU64());
    Tensor t(shape);
    r.GetDoubles(t.data(), static_cast<size_t>(t.size()));
    ar.tensors.emplace(name, std::move(t));
  }
  const uint32_t n_strings = r.GetU32();
  for (uint32_t i = 0; i < n_strings; ++i) {
    const std::string name = r.GetString();
    ar.strings.emplace(name, r.GetString());
  }
  return ar;
}

}  // namespace ttsaug

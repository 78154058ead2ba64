// Copyright 2026 The Foresight Authors
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

#ifndef FORESIGHT_COMMON_BINARY_IO_H_
#define FORESIGHT_COMMON_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foresight/common/errors.h"

namespace foresight {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  void PutBytes(std::span<const uint8_t> bytes) {
    buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  }
  void PutString(std::string_view s) {
    buffer_.insert(buffer_.end(), s.begin(), s.end());
  }
  void PutU8(uint8_t v) { buffer_.push_back(v); }
  void PutU32(uint32_t v) { PutRaw(&v, sizeof(v)); }
  void PutF32(float v) { PutRaw(&v, sizeof(v)); }
  void PutF32s(std::span<const float> v) {
    PutRaw(v.data(), v.size_bytes());
  }

  const std::vector<uint8_t>& bytes() const { return buffer_; }
  std::vector<uint8_t> Release() { return std::move(buffer_); }
  size_t size() const { return buffer_.size(); }

 private:
  void PutRaw(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    buffer_.insert(buffer_.end(), b, b + n);
  }
  std::vector<uint8_t> buffer_;
};

// Bounds-checked little-endian reader over a byte span. Running past the end
// throws the error type given at construction.
template <typename ErrorT = InvalidInputError>
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t GetU8() {
    Require(1);
    return bytes_[pos_++];
  }
  uint32_t GetU32() {
    uint32_t v;
    GetRaw(&v, sizeof(v));
    return v;
  }
  float GetF32() {
    float v;
    GetRaw(&v, sizeof(v));
    return v;
  }
  void GetF32s(std::span<float> out) { GetRaw(out.data(), out.size_bytes()); }
  std::span<const uint8_t> GetBytes(size_t n) {
    Require(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::string GetString(size_t n) {
    auto s = GetBytes(n);
    return std::string(s.begin(), s.end());
  }

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t position() const { return pos_; }

 private:
  void Require(size_t n) const {
    if (n > bytes_.size() - pos_) {
      throw ErrorT("truncated buffer: need " + std::to_string(n) +
                   " bytes, have " + std::to_string(bytes_.size() - pos_));
    }
  }
  void GetRaw(void* out, size_t n) {
    Require(n);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

// Creates the directories leading to `path` if needed.
void EnsureParentDirectory(const std::string& path);
std::vector<uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes);
void WriteTextFile(const std::string& path, std::string_view text);
std::string ReadTextFile(const std::string& path);

}  // namespace foresight

#endif  // FORESIGHT_COMMON_BINARY_IO_H_

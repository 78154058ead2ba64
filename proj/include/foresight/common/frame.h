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

#ifndef FORESIGHT_COMMON_FRAME_H_
#define FORESIGHT_COMMON_FRAME_H_

#include <cstdint>
#include <span>
#include <vector>

namespace foresight {

// An H x W x 3 image, row-major with interleaved channels, values in [0, 1].
struct Frame {
  static constexpr int kChannels = 3;

  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  Frame() = default;
  Frame(int h, int w) : height(h), width(w), pixels(size_t(h) * w * kChannels) {}

  size_t size() const { return pixels.size(); }
  std::span<float> data() { return pixels; }
  std::span<const float> data() const { return pixels; }
  float& at(int row, int col, int ch) {
    return pixels[(size_t(row) * width + col) * kChannels + ch];
  }
  float at(int row, int col, int ch) const {
    return pixels[(size_t(row) * width + col) * kChannels + ch];
  }

  bool operator==(const Frame&) const = default;
};

// Exact conversions between [0,1] floats and 8-bit storage. Rendered frames
// only ever hold values k/255, so the round trip is lossless for them.
std::vector<uint8_t> FrameToBytes(const Frame& frame);
Frame FrameFromBytes(int height, int width, std::span<const uint8_t> bytes);

}  // namespace foresight

#endif  // FORESIGHT_COMMON_FRAME_H_

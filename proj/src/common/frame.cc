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

#include "foresight/common/frame.h"

#include <algorithm>
#include <cmath>

#include "foresight/common/errors.h"

namespace foresight {

std::vector<uint8_t> FrameToBytes(const Frame& frame) {
  std::vector<uint8_t> out(frame.size());
  for (size_t i = 0; i < frame.size(); ++i) {
    const float v = std::clamp(frame.pixels[i], 0.0f, 1.0f);
    out[i] = static_cast<uint8_t>(std::lround(v * 255.0f));
  }
  return out;
}

Frame FrameFromBytes(int height, int width, std::span<const uint8_t> bytes) {
  Frame frame(height, width);
  if (bytes.size() != frame.size()) {
    throw InvalidInputError("frame byte count does not match shape");
  }
  for (size_t i = 0; i < bytes.size(); ++i) {
    frame.pixels[i] = static_cast<float>(bytes[i]) / 255.0f;
  }
  return frame;
}

}  // namespace foresight

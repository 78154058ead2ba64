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

#include "foresight/metrics/image_metrics.h"

#include <cmath>
#include <vector>

#include "foresight/common/errors.h"

namespace foresight {
namespace {

void CheckSameShape(const Frame& a, const Frame& b) {
  if (a.height != b.height || a.width != b.width || a.size() != b.size()) {
    throw InvalidInputError("frames differ in shape");
  }
}

}  // namespace

double Mse(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw InvalidInputError("mse: size mismatch");
  if (a.empty()) throw InvalidInputError("mse: empty input");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = double(a[i]) - double(b[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double Mse(const Frame& a, const Frame& b) {
  CheckSameShape(a, b);
  return Mse(a.data(), b.data());
}

double PsnrFromMse(double mse) {
  if (!(mse >= 0.0)) throw InvalidInputError("psnr: mse must be >= 0");
  if (mse == 0.0) return kPsnrSentinelDb;
  return std::min(kPsnrSentinelDb, 10.0 * std::log10(1.0 / mse));
}

double Psnr(const Frame& a, const Frame& b) { return PsnrFromMse(Mse(a, b)); }

double Ssim(std::span<const float> a, std::span<const float> b, int height,
            int width, int channels) {
  if (height < kSsimWindow || width < kSsimWindow || channels < 1) {
    throw InvalidInputError("ssim: image smaller than the 7x7 window");
  }
  const size_t n = size_t(height) * width * channels;
  if (a.size() != n || b.size() != n) throw InvalidInputError("ssim: size mismatch");

  const int k = kSsimWindow;
  const double inv = 1.0 / (k * k);
  const int rows = height - k + 1, cols = width - k + 1;
  double total = 0.0;
  for (int c = 0; c < channels; ++c) {
    for (int r0 = 0; r0 < rows; ++r0) {
      for (int c0 = 0; c0 < cols; ++c0) {
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (int r = r0; r < r0 + k; ++r) {
          const size_t base = (size_t(r) * width + c0) * channels + c;
          for (int q = 0; q < k; ++q) {
            const double x = a[base + size_t(q) * channels];
            const double y = b[base + size_t(q) * channels];
            sa += x;
            sb += y;
            saa += x * x;
            sbb += y * y;
            sab += x * y;
          }
        }
        const double ma = sa * inv, mb = sb * inv;
        const double va = saa * inv - ma * ma;
        const double vb = sbb * inv - mb * mb;
        const double cov = sab * inv - ma * mb;
        total += ((2 * ma * mb + kSsimC1) * (2 * cov + kSsimC2)) /
                 ((ma * ma + mb * mb + kSsimC1) * (va + vb + kSsimC2));
      }
    }
  }
  return total / (double(rows) * cols * channels);
}

double Ssim(const Frame& a, const Frame& b) {
  CheckSameShape(a, b);
  return Ssim(a.data(), b.data(), a.height, a.width);
}

}  // namespace foresight

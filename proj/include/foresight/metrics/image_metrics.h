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

#ifndef FORESIGHT_METRICS_IMAGE_METRICS_H_
#define FORESIGHT_METRICS_IMAGE_METRICS_H_

#include <span>

#include "foresight/common/frame.h"

namespace foresight {

// Reported instead of +inf for identical images.
inline constexpr double kPsnrSentinelDb = 999.0;

inline constexpr int kSsimWindow = 7;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

double Mse(std::span<const float> a, std::span<const float> b);
double Mse(const Frame& a, const Frame& b);

// 10 log10(1 / mse), peak value 1.
double PsnrFromMse(double mse);
double Psnr(const Frame& a, const Frame& b);

// Mean SSIM over channels and all valid 7x7 uniform windows (stride 1).
// Window statistics use population (1/49) moments.
double Ssim(std::span<const float> a, std::span<const float> b, int height,
            int width, int channels = Frame::kChannels);
double Ssim(const Frame& a, const Frame& b);

}  // namespace foresight

#endif  // FORESIGHT_METRICS_IMAGE_METRICS_H_

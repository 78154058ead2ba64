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

#include "foresight/costs/costs.h"

#include <cmath>

#include "foresight/common/errors.h"

namespace foresight {
namespace {

// Squared error of one frame, accumulated in float within short blocks and
// in double across blocks.
double FrameSquaredError(const float* a, const float* b, size_t n) {
  constexpr size_t kBlock = 192;
  double total = 0.0;
  size_t i = 0;
  for (; i + kBlock <= n; i += kBlock) {
    float block = 0.0f;
    for (size_t k = 0; k < kBlock; ++k) {
      const float d = a[i + k] - b[i + k];
      block += d * d;
    }
    total += block;
  }
  for (; i < n; ++i) {
    const double d = double(a[i]) - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

void CostSpec::Validate() const {
  if (!(pixel_weight >= 0) || !(classifier_weight >= 0)) {
    throw ConfigError("cost weights must be >= 0");
  }
  if (!(penalty_lambda >= 0)) throw ConfigError("penalty lambda must be >= 0");
  if ((kind == CostKind::kClassifierCombo) != static_cast<bool>(classifier)) {
    throw ConfigError(kind == CostKind::kClassifierCombo
                          ? "classifier_combo cost requires a classifier"
                          : "pixel_mse cost does not take a classifier");
  }
}

double PixelMseCost(std::span<const float> predicted, int horizon,
                    const Frame& goal) {
  const size_t n = goal.size();
  if (horizon < 1 || n == 0 || predicted.size() != n * horizon) {
    throw InvalidInputError("predicted rollout does not match the goal shape");
  }
  double cost = 0.0;
  for (int t = 0; t < horizon; ++t) {
    cost += FrameSquaredError(predicted.data() + n * t, goal.pixels.data(), n) /
            static_cast<double>(n);
  }
  return cost;
}

double ClassifierComboCost(std::span<const float> predicted, int horizon,
                           const Frame& goal, const CostSpec& spec) {
  if (spec.kind != CostKind::kClassifierCombo || !spec.classifier) {
    throw ConfigError("classifier_combo cost requires a classifier");
  }
  const double pixel = PixelMseCost(predicted, horizon, goal);
  double logits = 0.0;
  for (int t = 0; t < horizon; ++t) {
    logits += spec.classifier->Logit(predicted.subspan(goal.size() * t, goal.size()),
                                     goal.height, goal.width);
  }
  return spec.pixel_weight * pixel - spec.classifier_weight * (logits / horizon);
}

double EvaluateCost(const CostSpec& spec, std::span<const float> predicted,
                    int horizon, const Frame& goal) {
  switch (spec.kind) {
    case CostKind::kPixelMse:
      return spec.pixel_weight * PixelMseCost(predicted, horizon, goal);
    case CostKind::kClassifierCombo:
      return ClassifierComboCost(predicted, horizon, goal, spec);
  }
  throw ConfigError("unknown cost kind");
}

double PenalizedScore(double cost, double delta, double lambda) {
  return -cost - lambda * delta;
}

CostKind ParseCostKind(const std::string& name) {
  if (name == "pixel_mse") return CostKind::kPixelMse;
  if (name == "classifier_combo") return CostKind::kClassifierCombo;
  throw ConfigError("unknown cost kind '" + name + "'");
}

const char* CostKindName(CostKind kind) {
  return kind == CostKind::kPixelMse ? "pixel_mse" : "classifier_combo";
}

}  // namespace foresight

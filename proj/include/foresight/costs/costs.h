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

#ifndef FORESIGHT_COSTS_COSTS_H_
#define FORESIGHT_COSTS_COSTS_H_

#include <memory>
#include <span>
#include <string>

#include "foresight/common/frame.h"
#include "foresight/costs/classifier.h"

namespace foresight {

enum class CostKind { kPixelMse, kClassifierCombo };

struct CostSpec {
  CostKind kind = CostKind::kPixelMse;
  double pixel_weight = 1.0;
  double classifier_weight = 10.0;
  std::shared_ptr<const ClassifierModel> classifier;
  // disagreement penalty, only applied when planning with an ensemble
  double penalty_lambda = 0.01;

  static CostSpec PixelMse() { return {}; }
  static CostSpec ClassifierCombo(std::shared_ptr<const ClassifierModel> c) {
    CostSpec spec;
    spec.kind = CostKind::kClassifierCombo;
    spec.pixel_weight = 0.5;
    spec.classifier = std::move(c);
    return spec;
  }
  void Validate() const;
};

// sum over t of mean over pixels of (predicted_t - goal)^2. `predicted` holds
// horizon frames shaped like `goal`.
double PixelMseCost(std::span<const float> predicted, int horizon,
                    const Frame& goal);

// pixel_weight * pixel cost - classifier_weight * mean_t logit(predicted_t).
double ClassifierComboCost(std::span<const float> predicted, int horizon,
                           const Frame& goal, const CostSpec& spec);

double EvaluateCost(const CostSpec& spec, std::span<const float> predicted,
                    int horizon, const Frame& goal);

// score = -cost - lambda * delta.
double PenalizedScore(double cost, double delta, double lambda);

CostKind ParseCostKind(const std::string& name);
const char* CostKindName(CostKind kind);

}  // namespace foresight

#endif  // FORESIGHT_COSTS_COSTS_H_

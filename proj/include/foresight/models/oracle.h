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

#ifndef FORESIGHT_MODELS_ORACLE_H_
#define FORESIGHT_MODELS_ORACLE_H_

#include <memory>
#include <string>

#include "foresight/models/prediction.h"
#include "foresight/world/world.h"

namespace foresight {

// The simulator used as the dynamics model: steps the hidden state with the
// future part of each action sequence and renders every step.
class OracleModel : public ForwardModel {
 public:
  explicit OracleModel(WorldConfig config, std::string name = "oracle");

  const std::string& name() const override { return name_; }
  ModelKind kind() const override { return ModelKind::kOracle; }
  const WorldConfig& config() const { return config_; }

  PredictionResponse PredictImpl(const PredictionRequest& request,
                                 const HiddenStateToken* token) override;

  // Rolls `future_actions` ([horizon x 2]) from `state` into `out`.
  void Rollout(const SimState& state, std::span<const float> future_actions,
               int horizon, std::span<float> out) const;

 private:
  WorldConfig config_;
  std::string name_;
};

enum class DegradationKind { kBlur, kPixelNoise, kActionBlind, kLagged };

const char* DegradationKindName(DegradationKind kind);
// Accepts "blur", "pixel_noise" (alias "noise"), "action_blind", "lagged".
DegradationKind ParseDegradationKind(const std::string& name);

// Oracle wrapper with a controlled corruption:
//   blur         separable Gaussian, stdev `strength` px, 3-sigma, edge clamp
//   pixel_noise  i.i.d. N(0, strength^2) added per element, then clipped
//   action_blind every action replaced by zero
//   lagged       future actions delayed one step, the first applied is zero
class DegradedModel : public ForwardModel {
 public:
  DegradedModel(std::shared_ptr<OracleModel> base, DegradationKind kind,
                double strength, uint64_t seed, std::string name);

  const std::string& name() const override { return name_; }
  ModelKind kind() const override { return ModelKind::kDegraded; }
  DegradationKind degradation() const { return degradation_; }
  double strength() const { return strength_; }

  PredictionResponse PredictImpl(const PredictionRequest& request,
                                 const HiddenStateToken* token) override;

 private:
  void Blur(std::span<float> frame, int height, int width) const;
  void AddNoise(std::span<float> rollout, uint64_t key) const;

  std::shared_ptr<OracleModel> base_;
  DegradationKind degradation_;
  double strength_;
  uint64_t seed_;
  std::string name_;
  std::vector<float> kernel_;      // blur taps, centered
  std::vector<float> noise_tape_;  // seeded standard normals
};

// Throws ConfigError for negative strength.
std::shared_ptr<DegradedModel> MakeDegraded(std::shared_ptr<OracleModel> base,
                                            DegradationKind kind,
                                            double strength, uint64_t seed);

}  // namespace foresight

#endif  // FORESIGHT_MODELS_ORACLE_H_

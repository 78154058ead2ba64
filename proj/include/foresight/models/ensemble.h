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

#ifndef FORESIGHT_MODELS_ENSEMBLE_H_
#define FORESIGHT_MODELS_ENSEMBLE_H_

#include <vector>

#include "foresight/models/prediction.h"

namespace foresight {

class Rng;

struct EnsemblePrediction {
  PredictionResponse scoring;
  std::vector<PredictionResponse> all;
  int scoring_index = 0;
};

// N forward models queried on the same request. The planner draws one scoring
// member per planning step; the spread across members feeds the disagreement
// penalty.
class EnsembleModel : public ForwardModel {
 public:
  EnsembleModel(std::vector<ModelHandle> members, std::string name = "ensemble");

  const std::string& name() const override { return name_; }
  ModelKind kind() const override { return ModelKind::kEnsemble; }
  const std::vector<ModelHandle>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }

  void set_scoring_index(int index);
  int scoring_index() const { return scoring_index_; }

  // Returns the current scoring member's prediction.
  PredictionResponse PredictImpl(const PredictionRequest& request,
                                 const HiddenStateToken* token) override;

  // Every member predicts; a member failure aborts with that member's error.
  std::vector<PredictionResponse> PredictAll(const PredictionRequest& request,
                                             const HiddenStateToken* token);

 private:
  std::vector<ModelHandle> members_;
  std::string name_;
  int scoring_index_ = 0;
};

// Draws the scoring index uniformly from `rng`, then predicts with all members.
EnsemblePrediction EnsemblePredict(EnsembleModel& ensemble,
                                   const PredictionRequest& request,
                                   const HiddenStateToken* token, Rng& rng);

// delta_b = max_i mean_elements |frames_i[b] - mean_j frames_j[b]|, averaged
// over every element of candidate b's rollout.
std::vector<double> Disagreement(const std::vector<PredictionResponse>& all);

}  // namespace foresight

#endif  // FORESIGHT_MODELS_ENSEMBLE_H_

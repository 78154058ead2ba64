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

#include "foresight/models/ensemble.h"

#include <algorithm>
#include <cmath>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {

EnsembleModel::EnsembleModel(std::vector<ModelHandle> members, std::string name)
    : members_(std::move(members)), name_(std::move(name)) {
  if (members_.size() < 2) throw ConfigError("an ensemble needs at least 2 members");
  for (const auto& m : members_) {
    if (!m) throw ConfigError("null ensemble member");
    if (m->kind() == ModelKind::kEnsemble) {
      throw ConfigError("nested ensembles are not supported");
    }
    if (m->needs_token() != members_.front()->needs_token()) {
      throw ConfigError("ensemble members must share one signature");
    }
  }
}

void EnsembleModel::set_scoring_index(int index) {
  if (index < 0 || index >= size()) throw InvalidInputError("scoring index out of range");
  scoring_index_ = index;
}

PredictionResponse EnsembleModel::PredictImpl(const PredictionRequest& request,
                                              const HiddenStateToken* token) {
  auto& m = *members_[scoring_index_];
  return Predict(m, request, m.needs_token() ? token : nullptr);
}

std::vector<PredictionResponse> EnsembleModel::PredictAll(
    const PredictionRequest& request, const HiddenStateToken* token) {
  std::vector<PredictionResponse> out;
  out.reserve(members_.size());
  for (const auto& m : members_) {
    out.push_back(Predict(*m, request, m->needs_token() ? token : nullptr));
  }
  return out;
}

EnsemblePrediction EnsemblePredict(EnsembleModel& ensemble,
                                   const PredictionRequest& request,
                                   const HiddenStateToken* token, Rng& rng) {
  EnsemblePrediction out;
  out.scoring_index = static_cast<int>(rng.UniformInt(ensemble.size()));
  out.all = ensemble.PredictAll(request, token);
  out.scoring = out.all[out.scoring_index];
  return out;
}

std::vector<double> Disagreement(const std::vector<PredictionResponse>& all) {
  if (all.size() < 2) throw InvalidInputError("disagreement needs >= 2 predictions");
  const auto& ref = all.front();
  for (const auto& r : all) {
    if (r.batch != ref.batch || r.horizon != ref.horizon ||
        r.height != ref.height || r.width != ref.width ||
        r.channels != ref.channels || r.frames.size() != ref.frames.size()) {
      throw InvalidInputError("ensemble predictions differ in shape");
    }
  }
  const size_t n = ref.RolloutSize();
  const double members = static_cast<double>(all.size());
  std::vector<double> mean(n);
  std::vector<double> delta(ref.batch, 0.0);
  for (int b = 0; b < ref.batch; ++b) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (const auto& r : all) {
      auto x = r.Rollout(b);
      for (size_t e = 0; e < n; ++e) mean[e] += x[e];
    }
    for (auto& m : mean) m /= members;
    for (const auto& r : all) {
      auto x = r.Rollout(b);
      double sum = 0.0;
      for (size_t e = 0; e < n; ++e) sum += std::abs(x[e] - mean[e]);
      delta[b] = std::max(delta[b], n > 0 ? sum / static_cast<double>(n) : 0.0);
    }
  }
  return delta;
}

}  // namespace foresight

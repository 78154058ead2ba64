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

#ifndef FORESIGHT_PLANNING_MPC_H_
#define FORESIGHT_PLANNING_MPC_H_

#include <memory>
#include <string>
#include <vector>

#include "foresight/costs/costs.h"
#include "foresight/models/ensemble.h"
#include "foresight/models/prediction.h"
#include "foresight/planning/optimizer.h"
#include "foresight/world/tasks.h"
#include "foresight/world/world.h"

namespace foresight {

struct MpcConfig {
  int episode_len = kDefaultEpisodeHorizon;
  int replan_every = 1;  // fixed: replan at every control step
  // Keep every candidate's cost/delta/score per step in the diagnostics.
  bool record_candidates = false;
  void Validate() const;
};

// Per-episode planner diagnostics; arrays have one entry per executed step.
struct PlanDiagnostics {
  std::vector<double> best_score;
  std::vector<double> mean_score;
  std::vector<double> score_stdev;
  std::vector<double> mean_delta;
  std::vector<int> scoring_index;
  std::vector<double> wall_time_s;
  std::vector<CandidateLog> candidates;  // filled when record_candidates
  std::string error;                     // set when the episode aborted
};

struct EpisodeResult {
  std::string task_id;
  std::string category;
  std::vector<Action> actions;
  std::vector<Frame> frames;
  std::vector<SimState> states;
  bool success = false;
  PlanDiagnostics diagnostics;
};

// Scores candidates by predicting them with `model` and applying the cost to
// each rollout against the goal image. With an ensemble model the scoring
// member is drawn once per planning step and every score is penalized by the
// members' disagreement. Single models also consume that draw (over one
// member) so that a run's random stream does not depend on ensembling.
class VisualEvaluator : public CandidateEvaluator {
 public:
  VisualEvaluator(ForwardModel& model, const CostSpec& cost, const Frame& goal,
                  const std::vector<Frame>& context,
                  const std::vector<Action>& past_actions,
                  const HiddenStateToken* token, int chunk);

  void BeginStep(Rng& rng) override;
  CandidateScores Evaluate(const CandidateBatch& candidates) override;
  double DefaultScoreScale() const override {
    return static_cast<double>(goal_.size());
  }
  int scoring_index() const { return scoring_index_; }

 private:
  PredictionRequest MakeRequest(const CandidateBatch& candidates, int begin,
                                int count) const;

  ForwardModel& model_;
  EnsembleModel* ensemble_;
  const CostSpec& cost_;
  const Frame& goal_;
  const std::vector<Frame>& context_;
  const std::vector<Action>& past_actions_;
  const HiddenStateToken* token_;
  int chunk_;
  int scoring_index_ = 0;
};

// One visual-foresight planning step from the current context.
PlanStepResult PlanStep(ForwardModel& model, const CostSpec& cost,
                        const TaskInstance& task,
                        const std::vector<Frame>& context,
                        const std::vector<Action>& past_actions,
                        const HiddenStateToken* token,
                        const ActionPlan& warm_start,
                        const PlannerConfig& config, double action_bound,
                        Rng& rng, bool record_candidates = false,
                        int* scoring_index = nullptr);

// Receding-horizon control: plan, execute the first action, observe, shift
// the warm start, repeat episode_len times, then judge success from the
// simulator state. Model or planner failures end the episode as a failure
// with diagnostics.error set.
EpisodeResult RunEpisode(const WorldConfig& world, ForwardModel& model,
                         const CostSpec& cost, const TaskInstance& task,
                         const PlannerConfig& planner, const MpcConfig& mpc,
                         Rng& rng);

}  // namespace foresight

#endif  // FORESIGHT_PLANNING_MPC_H_

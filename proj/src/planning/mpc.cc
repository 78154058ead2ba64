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

#include "foresight/planning/mpc.h"

#include <chrono>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {

void MpcConfig::Validate() const {
  if (episode_len < 1) throw ConfigError("episode_len must be >= 1");
  if (replan_every != 1) throw ConfigError("replan_every is fixed at 1");
}

VisualEvaluator::VisualEvaluator(ForwardModel& model, const CostSpec& cost,
                                 const Frame& goal,
                                 const std::vector<Frame>& context,
                                 const std::vector<Action>& past_actions,
                                 const HiddenStateToken* token, int chunk)
    : model_(model),
      ensemble_(model.kind() == ModelKind::kEnsemble
                    ? static_cast<EnsembleModel*>(&model)
                    : nullptr),
      cost_(cost),
      goal_(goal),
      context_(context),
      past_actions_(past_actions),
      token_(token),
      chunk_(chunk) {
  if (past_actions_.size() + 1 != context_.size()) {
    throw InvalidInputError("need exactly T_c - 1 past actions");
  }
}

void VisualEvaluator::BeginStep(Rng& rng) {
  const uint64_t members = ensemble_ ? ensemble_->size() : 1;
  scoring_index_ = static_cast<int>(rng.UniformInt(members));
  if (ensemble_) ensemble_->set_scoring_index(scoring_index_);
}

PredictionRequest VisualEvaluator::MakeRequest(const CandidateBatch& candidates,
                                               int begin, int count) const {
  PredictionRequest req;
  req.context = context_;
  req.batch = count;
  req.horizon = candidates.horizon;
  req.action_dim = candidates.dim;
  const int past = static_cast<int>(past_actions_.size());
  req.actions.reserve(size_t(count) * (past + candidates.horizon) * candidates.dim);
  for (int i = begin; i < begin + count; ++i) {
    for (const auto& a : past_actions_) {
      req.actions.push_back(a.delta.x);
      req.actions.push_back(a.delta.y);
    }
    auto c = candidates.Candidate(i);
    req.actions.insert(req.actions.end(), c.begin(), c.end());
  }
  return req;
}

CandidateScores VisualEvaluator::Evaluate(const CandidateBatch& candidates) {
  if (candidates.dim != 2) throw InvalidInputError("this world uses 2-D actions");
  CandidateScores out;
  out.costs.resize(candidates.count);
  out.scores.resize(candidates.count);
  if (ensemble_) out.deltas.resize(candidates.count);
  const HiddenStateToken* token =
      model_.kind() == ModelKind::kRemote ? nullptr : token_;

  for (int begin = 0; begin < candidates.count; begin += chunk_) {
    const int count = std::min(chunk_, candidates.count - begin);
    const PredictionRequest req = MakeRequest(candidates, begin, count);
    if (ensemble_) {
      req.Validate();
      const auto all = ensemble_->PredictAll(req, token);
      const auto deltas = Disagreement(all);
      const auto& scoring = all[scoring_index_];
      for (int b = 0; b < count; ++b) {
        const double c = EvaluateCost(cost_, scoring.Rollout(b), req.horizon, goal_);
        out.costs[begin + b] = c;
        out.deltas[begin + b] = deltas[b];
        out.scores[begin + b] = PenalizedScore(c, deltas[b], cost_.penalty_lambda);
      }
    } else {
      const auto resp = Predict(model_, req, token);
      for (int b = 0; b < count; ++b) {
        const double c = EvaluateCost(cost_, resp.Rollout(b), req.horizon, goal_);
        out.costs[begin + b] = c;
        out.scores[begin + b] = -c;
      }
    }
  }
  return out;
}

PlanStepResult PlanStep(ForwardModel& model, const CostSpec& cost,
                        const TaskInstance& task,
                        const std::vector<Frame>& context,
                        const std::vector<Action>& past_actions,
                        const HiddenStateToken* token,
                        const ActionPlan& warm_start,
                        const PlannerConfig& config, double action_bound,
                        Rng& rng, bool record_candidates, int* scoring_index) {
  if (static_cast<int>(context.size()) != config.context_len) {
    throw InvalidInputError("context must hold exactly T_c frames");
  }
  VisualEvaluator evaluator(model, cost, task.goal_frame, context, past_actions,
                            token, config.eval_chunk);
  auto result = OptimizeStep(evaluator, warm_start, config, action_bound, rng,
                             record_candidates);
  if (scoring_index) *scoring_index = evaluator.scoring_index();
  return result;
}

EpisodeResult RunEpisode(const WorldConfig& world, ForwardModel& model,
                         const CostSpec& cost, const TaskInstance& task,
                         const PlannerConfig& planner, const MpcConfig& mpc,
                         Rng& rng) {
  EpisodeResult result;
  result.task_id = task.id;
  result.category = task.category;
  auto& diag = result.diagnostics;

  SimState state = task.init_state;
  try {
    planner.Validate();
    mpc.Validate();
    cost.Validate();
    ParseCategory(task.category, world);
    ValidateState(state, world);

    Frame frame = Render(state, world);
    std::vector<Frame> context(planner.context_len, frame);
    std::vector<Action> past_actions(planner.context_len - 1);
    ActionPlan warm(planner.plan_horizon, planner.action_dim());
    result.states.push_back(state);
    result.frames.push_back(frame);

    for (int step = 0; step < mpc.episode_len; ++step) {
      const auto t0 = std::chrono::steady_clock::now();
      const HiddenStateToken token{state};
      int scoring_index = 0;
      PlanStepResult plan =
          PlanStep(model, cost, task, context, past_actions, &token, warm,
                   planner, world.max_action_step, rng, mpc.record_candidates,
                   &scoring_index);
      const Action action = ClipAction(
          {{static_cast<float>(plan.best.at(0, 0)),
            static_cast<float>(plan.best.at(0, 1))}},
          world);
      state = Step(state, action, world);
      frame = Render(state, world);

      result.actions.push_back(action);
      result.states.push_back(state);
      result.frames.push_back(frame);
      context.erase(context.begin());
      context.push_back(frame);
      if (!past_actions.empty()) {
        past_actions.erase(past_actions.begin());
        past_actions.push_back(action);
      }
      warm = ShiftWarmStart(plan.new_mean);

      diag.best_score.push_back(plan.stats.best_score);
      diag.mean_score.push_back(plan.stats.mean_score);
      diag.score_stdev.push_back(plan.stats.score_stdev);
      diag.mean_delta.push_back(plan.stats.mean_delta);
      diag.scoring_index.push_back(scoring_index);
      diag.wall_time_s.push_back(std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count());
      if (plan.stats.log) diag.candidates.push_back(std::move(*plan.stats.log));
    }
    result.success = Success(state, task, world);
  } catch (const std::exception& e) {
    diag.error = e.what();
    result.success = false;
  }
  return result;
}

}  // namespace foresight

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

#ifndef FORESIGHT_WORLD_TASKS_H_
#define FORESIGHT_WORLD_TASKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "foresight/world/world.h"

namespace foresight {

inline constexpr float kDefaultSuccessRadius = 0.05f;
inline constexpr int kDefaultEpisodeHorizon = 15;

struct TaskInstance {
  std::string id;
  std::string category;
  SimState init_state;
  Frame goal_frame;
  SimState goal_state;
  float success_radius = kDefaultSuccessRadius;
};

// True iff the category's target object is within success_radius (closed
// ball) of its goal position. Throws ConfigError on unknown categories.
bool Success(const SimState& state, const TaskInstance& task,
             const WorldConfig& config);

// Scripted two-phase pushing expert. Phase 1 drives the pusher to a staging
// point behind the target; phase 2 (latched) drives it toward
// object_start + push_distance * (cos theta, sin theta).
struct PushPlan {
  static constexpr float kGain = 0.7f;
  static constexpr float kStagingOffset = 0.01f;
  static constexpr float kPhaseSwitchDistance = 0.02f;
  static constexpr float kDefaultPushDistance = 0.25f;

  int target = 0;
  float theta = 0.0f;  // in [0, pi]
  float push_distance = kDefaultPushDistance;
  Vec2 object_start;
  bool pushing = false;
};

PushPlan MakePushPlan(const SimState& state, int target, float theta);

// Returns gain * (goal - pusher), clipped. Updates plan.pushing.
Action ScriptedPushPolicy(const SimState& state, PushPlan& plan,
                          const WorldConfig& config);

struct TaskGenerationOptions {
  int n_per_category = 25;
  int horizon = kDefaultEpisodeHorizon;
  float success_radius = kDefaultSuccessRadius;
  int max_consecutive_rejections = 100;
};

// Goals come from noiseless scripted rollouts of exactly `horizon` steps;
// instances whose target moves no more than success_radius are resampled.
std::vector<TaskInstance> GenerateTaskInstances(
    const WorldConfig& config, uint64_t seed,
    const TaskGenerationOptions& options = {});

}  // namespace foresight

#endif  // FORESIGHT_WORLD_TASKS_H_

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

#include "foresight/world/tasks.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {

bool Success(const SimState& state, const TaskInstance& task,
             const WorldConfig& config) {
  const int k = ParseCategory(task.category, config);
  if (k >= static_cast<int>(state.objects.size()) ||
      k >= static_cast<int>(task.goal_state.objects.size())) {
    throw ConfigError("task category targets a missing object");
  }
  const Vec2 p = state.objects[k].pos;
  const Vec2 g = task.goal_state.objects[k].pos;
  const double d = std::hypot(double(p.x) - g.x, double(p.y) - g.y);
  return d <= task.success_radius;
}

PushPlan MakePushPlan(const SimState& state, int target, float theta) {
  PushPlan plan;
  plan.target = target;
  plan.theta = theta;
  plan.object_start = state.objects.at(target).pos;
  return plan;
}

Action ScriptedPushPolicy(const SimState& state, PushPlan& plan,
                          const WorldConfig& config) {
  const double c = std::cos(double(plan.theta));
  const double s = std::sin(double(plan.theta));
  const Vec2 obj = state.objects.at(plan.target).pos;
  const double px = state.pusher_pos.x, py = state.pusher_pos.y;

  if (!plan.pushing) {
    const double back = config.pusher_radius +
                        config.object_radius(plan.target) +
                        PushPlan::kStagingOffset;
    const double sx = obj.x - back * c, sy = obj.y - back * s;
    if (std::hypot(sx - px, sy - py) <= PushPlan::kPhaseSwitchDistance) {
      plan.pushing = true;
    } else {
      return ClipAction({{static_cast<float>(PushPlan::kGain * (sx - px)),
                          static_cast<float>(PushPlan::kGain * (sy - py))}},
                        config);
    }
  }
  const double gx = plan.object_start.x + plan.push_distance * c;
  const double gy = plan.object_start.y + plan.push_distance * s;
  return ClipAction({{static_cast<float>(PushPlan::kGain * (gx - px)),
                      static_cast<float>(PushPlan::kGain * (gy - py))}},
                    config);
}

std::vector<TaskInstance> GenerateTaskInstances(
    const WorldConfig& config, uint64_t seed,
    const TaskGenerationOptions& options) {
  config.Validate();
  if (options.n_per_category < 1) {
    throw InvalidInputError("n_per_category must be at least 1");
  }
  Rng rng(seed);
  std::vector<TaskInstance> out;
  for (int k = 0; k < config.num_objects(); ++k) {
    int rejections = 0;
    for (int produced = 0; produced < options.n_per_category;) {
      const SimState init = SampleInitialState(config, rng);
      const float theta = static_cast<float>(rng.Uniform(0.0, std::numbers::pi));
      PushPlan plan = MakePushPlan(init, k, theta);
      SimState state = init;
      for (int t = 0; t < options.horizon; ++t) {
        state = Step(state, ScriptedPushPolicy(state, plan, config), config);
      }
      const Vec2 a = init.objects[k].pos, b = state.objects[k].pos;
      if (std::hypot(double(a.x) - b.x, double(a.y) - b.y) <=
          options.success_radius) {
        if (++rejections > options.max_consecutive_rejections) {
          throw GenerationError(
              "more than " + std::to_string(options.max_consecutive_rejections) +
              " consecutive rejections for " + CategoryName(k));
        }
        continue;
      }
      rejections = 0;
      TaskInstance task;
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%03d", CategoryName(k).c_str(), produced);
      task.id = id;
      task.category = CategoryName(k);
      task.init_state = init;
      task.goal_state = state;
      task.goal_frame = Render(task.goal_state, config);
      task.success_radius = options.success_radius;
      out.push_back(std::move(task));
      ++produced;
    }
  }
  return out;
}

}  // namespace foresight

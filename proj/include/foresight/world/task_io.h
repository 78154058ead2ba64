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

#ifndef FORESIGHT_WORLD_TASK_IO_H_
#define FORESIGHT_WORLD_TASK_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "foresight/world/tasks.h"
#include "foresight/world/world.h"

namespace foresight {

nlohmann::json ToJson(const WorldConfig& config);
WorldConfig WorldConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const SimState& state);
SimState SimStateFromJson(const nlohmann::json& j);

// Raw image file: "VPIM", u8 version 1, u32 H, W, C, then u8 pixels.
void WriteImageFile(const std::string& path, const Frame& frame);
Frame ReadImageFile(const std::string& path);

struct TaskSet {
  WorldConfig config;
  std::vector<TaskInstance> instances;
};

// Writes the JSON document to `path` and one goal image per instance next to
// it (<id>.vpim in the same directory).
void SaveTaskSet(const std::string& path, const TaskSet& tasks);

// Loads and checks that every goal frame equals the render of its goal state.
TaskSet LoadTaskSet(const std::string& path);

}  // namespace foresight

#endif  // FORESIGHT_WORLD_TASK_IO_H_

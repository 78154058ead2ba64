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

#ifndef FORESIGHT_BENCH_CONFIG_H_
#define FORESIGHT_BENCH_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "foresight/costs/classifier.h"
#include "foresight/costs/costs.h"
#include "foresight/metrics/reports.h"
#include "foresight/planning/mpc.h"
#include "foresight/planning/optimizer.h"
#include "foresight/world/dataset.h"
#include "foresight/world/tasks.h"
#include "foresight/world/world.h"

namespace foresight {

inline constexpr char kEngineVersion[] = "foresight 1.0.0";

// Dotted key -> textual value, e.g. "planner.n_samples" -> "200".
using SettingMap = std::map<std::string, std::string>;

// "key = value" lines; '#' starts a comment; blank lines are ignored.
SettingMap ParseFlatConfig(const std::string& text);
// Nested objects become dotted keys; arrays become comma-separated values.
SettingMap FlattenJsonConfig(const std::string& text);
// JSON when the file starts with '{', flat text otherwise.
SettingMap LoadConfigFile(const std::string& path);
std::string FormatFlatConfig(const SettingMap& settings);

struct ModelSettings {
  std::string kind = "oracle";  // a zoo entry such as "blur:2.0"
  std::string cmd;              // remote model as a subprocess
  std::string addr;             // remote model over TCP, host:port
  int ensemble = 1;
  double timeout_s = 30.0;
};

struct BenchConfig {
  WorldConfig world;
  PlannerConfig planner;
  MpcConfig mpc;
  CostSpec cost;
  std::string classifier_path;
  ModelSettings model;
  DatasetOptions data;
  TaskGenerationOptions tasks;
  ClassifierTrainOptions classifier;
  std::string classifier_category = "push_object_0";
  MetricOptions metrics;
  std::string zoo = "oracle,blur:2.0,action_blind";
  std::string dataset_path;
  std::string heldout_path;
  std::string tasks_path;
  std::string output_path;
  uint64_t master_seed = 0;
  // Set by "cost.pixel_weight"; otherwise the cost kind's default applies.
  std::optional<double> explicit_pixel_weight;

  // Overwrites the fields named by `settings`; unknown keys and malformed
  // values raise ConfigError.
  void Apply(const SettingMap& settings);
  // Every reproducibility-relevant key with its current value. Output paths
  // are left out so that runs into different directories compare equal.
  SettingMap Snapshot() const;
  void Validate() const;

  // seed_role = DeriveSeed(master_seed, role).
  uint64_t SeedFor(const std::string& role) const;
};

}  // namespace foresight

#endif  // FORESIGHT_BENCH_CONFIG_H_

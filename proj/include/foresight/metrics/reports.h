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

#ifndef FORESIGHT_METRICS_REPORTS_H_
#define FORESIGHT_METRICS_REPORTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foresight/costs/costs.h"
#include "foresight/models/prediction.h"
#include "foresight/planning/mpc.h"
#include "foresight/world/tasks.h"
#include "foresight/world/world.h"
#include "json.hpp"

namespace foresight {

inline constexpr int kReportSchemaVersion = 1;

// ---- prediction quality ----

struct SequenceMetrics {
  int episode = 0;
  int start = 0;  // index of the first context frame
  double mse = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct ModelMetrics {
  std::string model;
  double mse = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<SequenceMetrics> sequences;
};

struct MetricReport {
  std::vector<ModelMetrics> models;
};

struct MetricOptions {
  int n_sequences = 100;
  int context_len = 2;
  int horizon = 10;
  uint64_t seed = 0;
};

// Samples n_sequences windows of context_len + horizon frames from the
// held-out dataset, predicts the horizon from the context frames and the
// recorded actions, and compares against the recorded frames. Per-sequence
// values average the per-frame metrics; the model values average sequences.
// The same seed selects the same windows for every model.
ModelMetrics EvaluatePredictionMetrics(ForwardModel& model,
                                       const std::string& heldout_path,
                                       const WorldConfig& world,
                                       const MetricOptions& options);

// ---- control success ----

struct CategoryRate {
  std::string category;
  int successes = 0;
  int episodes = 0;
  double rate = 0.0;
};

struct ControlReport {
  std::string model;
  std::vector<CategoryRate> categories;  // sorted by category name
  int successes = 0;
  int episodes = 0;
  int errored = 0;
  double success_rate = 0.0;
  std::optional<double> baseline_rate;
  std::optional<double> normalized_score;
  // Baseline supplied but its success rate is zero.
  bool normalization_warning = false;
  std::vector<EpisodeResult> results;
};

// Throws InvalidInputError for empty results.
ControlReport AggregateControl(const std::vector<EpisodeResult>& results,
                               const std::vector<EpisodeResult>* baseline,
                               const std::string& model_name);

// Per-episode random stream for a benchmark run; equal for every model so
// that runs are paired.
uint64_t EpisodeSeed(uint64_t planner_seed, const std::string& task_id);

struct BenchmarkSettings {
  WorldConfig world;
  PlannerConfig planner;
  MpcConfig mpc;
  CostSpec cost;
};

// run_episode over every task instance in order.
std::vector<EpisodeResult> RunControlBenchmark(
    ForwardModel& model, const std::vector<TaskInstance>& tasks,
    const BenchmarkSettings& settings);

// ---- study ----

// Spearman rank correlation with average ranks for ties; nullopt when fewer
// than two points or when either side is constant.
std::optional<double> Spearman(const std::vector<double>& x,
                               const std::vector<double>& y);

struct StudyRow {
  std::string model;
  double mse = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double success = 0.0;
};

// A model pair ranked one way by a metric and the other way by success.
struct RankInversion {
  std::string metric;
  std::string better_by_metric;
  std::string better_by_success;
};

struct MetricCorrelation {
  std::string metric;               // "mse", "psnr", "ssim"
  bool higher_is_better = true;
  std::optional<double> spearman;   // raw metric value vs. success
  bool inverted = false;            // at least one pair disagrees
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::vector<MetricCorrelation> correlations;  // empty for a single model
  std::vector<RankInversion> inversions;
  MetricReport metrics;
  std::vector<ControlReport> control;
};

// Joins metric rows with success rates, computes correlations and flags.
StudyReport BuildStudyReport(const MetricReport& metrics,
                             const std::vector<ControlReport>& control);

struct StudyOptions {
  BenchmarkSettings bench;
  MetricOptions metrics;
};

// Metrics and the control benchmark for every model, in zoo order. The first
// oracle in the zoo (if any) is the normalization baseline.
StudyReport RunStudy(const std::vector<ModelHandle>& zoo,
                     const std::vector<TaskInstance>& tasks,
                     const std::string& heldout_path,
                     const StudyOptions& options);

// ---- serialization ----

nlohmann::ordered_json ToJson(const MetricReport& report);
nlohmann::ordered_json ToJson(const ControlReport& report,
                              bool include_episodes = true);
nlohmann::ordered_json ToJson(const StudyReport& report);
nlohmann::ordered_json EpisodeToJson(const EpisodeResult& result);

// One row per (model, category).
std::string ControlCsv(const std::vector<ControlReport>& reports);
// One row per model.
std::string StudyCsv(const StudyReport& report);

}  // namespace foresight

#endif  // FORESIGHT_METRICS_REPORTS_H_

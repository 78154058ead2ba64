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

#ifndef FORESIGHT_PLANNING_OPTIMIZER_H_
#define FORESIGHT_PLANNING_OPTIMIZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace foresight {

class Rng;

enum class PlannerAlgorithm { kMppi, kCem, kRandomShooting };

PlannerAlgorithm ParsePlannerAlgorithm(const std::string& name);
const char* PlannerAlgorithmName(PlannerAlgorithm algorithm);

struct PlannerConfig {
  int n_samples = 200;
  double temperature = 0.05;        // gamma: weights ~ exp(gamma * score)
  double noise_correlation = 0.5;   // beta of the filtered noise
  std::vector<double> sample_stdev = {0.04, 0.04};  // per action dimension
  int plan_horizon = 10;
  int context_len = 2;
  PlannerAlgorithm algorithm = PlannerAlgorithm::kMppi;
  double cem_elite_frac = 0.1;
  int cem_iterations = 3;
  // Multiplies scores before the MPPI weighting. Unset means "the number of
  // elements in one predicted frame", which turns the per-element-mean pixel
  // cost back into a summed squared error. Rank-based algorithms ignore it.
  std::optional<double> score_scale;
  // Candidates are predicted and scored in chunks of this size.
  int eval_chunk = 50;
  uint64_t seed = 0;

  int action_dim() const { return static_cast<int>(sample_stdev.size()); }
  int n_elites() const;
  void Validate() const;
};

// A [horizon x action_dim] action sequence.
struct ActionPlan {
  int horizon = 0;
  int dim = 0;
  std::vector<double> values;

  ActionPlan() = default;
  ActionPlan(int t, int a) : horizon(t), dim(a), values(size_t(t) * a, 0.0) {}
  double& at(int t, int a) { return values[size_t(t) * dim + a]; }
  double at(int t, int a) const { return values[size_t(t) * dim + a]; }
  bool operator==(const ActionPlan&) const = default;
};

// n candidate sequences stored [n x horizon x dim] in single precision, the
// precision in which they reach every model.
struct CandidateBatch {
  int count = 0;
  int horizon = 0;
  int dim = 0;
  std::vector<float> values;

  std::span<const float> Candidate(int i) const {
    const size_t n = size_t(horizon) * dim;
    return std::span(values).subspan(n * i, n);
  }
  float at(int i, int t, int a) const {
    return values[(size_t(i) * horizon + t) * dim + a];
  }
};

// Filtered Gaussian noise around `mean`:
//   u_t ~ N(0, diag(stdev_t^2)), n_t = beta * u_t + (1 - beta) * n_{t-1},
//   n_{-1} = 0, candidate_t = clip(mean_t + n_t, [-bound, bound]).
// `stdev` has either `dim` entries (shared by all steps) or horizon * dim.
CandidateBatch SampleActionSequences(const ActionPlan& mean,
                                     std::span<const double> stdev,
                                     double beta, double bound, int n_samples,
                                     Rng& rng);

// w_i = exp(gamma * (s_i - max s)) / sum. Entries equal to -inf get weight 0;
// throws PlannerError when every score is -inf or any score is NaN/+inf.
std::vector<double> MppiWeights(std::span<const double> scores, double gamma);

struct CandidateScores {
  std::vector<double> costs;
  std::vector<double> deltas;  // empty unless an ensemble is scoring
  std::vector<double> scores;
};

// Scores candidate sequences. BeginStep runs once per planning step after the
// first round of sampling, and may consume randomness (ensemble draw).
class CandidateEvaluator {
 public:
  virtual ~CandidateEvaluator() = default;
  virtual void BeginStep(Rng& rng) { (void)rng; }
  virtual CandidateScores Evaluate(const CandidateBatch& candidates) = 0;
  // Default scale for MppiWeights when PlannerConfig::score_scale is unset.
  virtual double DefaultScoreScale() const { return 1.0; }
};

// Per planning-step record of every candidate, for offline property checks.
struct CandidateLog {
  std::vector<double> costs;
  std::vector<double> deltas;
  std::vector<double> scores;
  int selected = -1;  // highest-scoring candidate of the final round
};

struct StepStats {
  double best_score = 0.0;
  double mean_score = 0.0;
  double score_stdev = 0.0;
  double mean_delta = 0.0;
  std::optional<CandidateLog> log;
};

struct PlanStepResult {
  ActionPlan best;
  ActionPlan new_mean;
  StepStats stats;
};

// One planning step: MPPI performs one sampling round and returns the
// weighted mean; CEM performs cem_iterations elite refits and returns the
// final elite mean; random shooting returns the best candidate and leaves the
// mean unchanged. Randomness is consumed in a fixed order: candidate
// sampling, then evaluator.BeginStep, then any further CEM rounds.
PlanStepResult OptimizeStep(CandidateEvaluator& evaluator,
                            const ActionPlan& warm_start,
                            const PlannerConfig& config, double action_bound,
                            Rng& rng, bool record_candidates = false);

// The next warm start: shift left one step and zero the tail.
ActionPlan ShiftWarmStart(const ActionPlan& plan);

}  // namespace foresight

#endif  // FORESIGHT_PLANNING_OPTIMIZER_H_

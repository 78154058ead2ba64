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

#include "foresight/planning/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void SanitizeScores(std::vector<double>& scores) {
  for (double& s : scores) {
    if (!std::isfinite(s)) s = kNegInf;
  }
}

int ArgMax(const std::vector<double>& scores) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

void FillStats(const CandidateScores& s, StepStats& stats) {
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  stats.best_score = kNegInf;
  for (double v : s.scores) {
    if (!std::isfinite(v)) continue;
    stats.best_score = std::max(stats.best_score, v);
    sum += v;
    ++n;
  }
  stats.mean_score = n ? sum / n : kNegInf;
  for (double v : s.scores) {
    if (std::isfinite(v)) sum_sq += (v - stats.mean_score) * (v - stats.mean_score);
  }
  stats.score_stdev = n ? std::sqrt(sum_sq / n) : 0.0;
  stats.mean_delta =
      s.deltas.empty()
          ? 0.0
          : std::accumulate(s.deltas.begin(), s.deltas.end(), 0.0) / s.deltas.size();
}

CandidateScores EvaluateChecked(CandidateEvaluator& evaluator,
                                const CandidateBatch& batch) {
  CandidateScores s = evaluator.Evaluate(batch);
  if (static_cast<int>(s.scores.size()) != batch.count) {
    throw PlannerError("evaluator returned the wrong number of scores");
  }
  SanitizeScores(s.scores);
  if (std::all_of(s.scores.begin(), s.scores.end(),
                  [](double v) { return v == kNegInf; })) {
    throw PlannerError("every candidate has a non-finite cost");
  }
  return s;
}

ActionPlan CandidateAsPlan(const CandidateBatch& batch, int i) {
  ActionPlan plan(batch.horizon, batch.dim);
  auto c = batch.Candidate(i);
  for (size_t k = 0; k < c.size(); ++k) plan.values[k] = c[k];
  return plan;
}

}  // namespace

PlannerAlgorithm ParsePlannerAlgorithm(const std::string& name) {
  if (name == "mppi") return PlannerAlgorithm::kMppi;
  if (name == "cem") return PlannerAlgorithm::kCem;
  if (name == "random_shooting") return PlannerAlgorithm::kRandomShooting;
  throw ConfigError("unknown planner algorithm '" + name + "'");
}

const char* PlannerAlgorithmName(PlannerAlgorithm algorithm) {
  switch (algorithm) {
    case PlannerAlgorithm::kMppi: return "mppi";
    case PlannerAlgorithm::kCem: return "cem";
    case PlannerAlgorithm::kRandomShooting: return "random_shooting";
  }
  return "unknown";
}

int PlannerConfig::n_elites() const {
  return static_cast<int>(std::floor(cem_elite_frac * n_samples + 1e-9));
}

void PlannerConfig::Validate() const {
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  if (!(temperature > 0)) throw ConfigError("temperature must be > 0");
  if (!(noise_correlation >= 0 && noise_correlation <= 1)) {
    throw ConfigError("noise_correlation must lie in [0, 1]");
  }
  if (sample_stdev.empty()) throw ConfigError("sample_stdev is empty");
  for (double s : sample_stdev) {
    if (!(s >= 0)) throw ConfigError("sample_stdev entries must be >= 0");
  }
  if (plan_horizon < 1) throw ConfigError("plan_horizon must be >= 1");
  if (context_len < 1) throw ConfigError("context_len must be >= 1");
  if (algorithm == PlannerAlgorithm::kCem) {
    if (n_elites() < 1) throw ConfigError("cem_elite_frac * n_samples must be >= 1");
    if (cem_iterations < 1) throw ConfigError("cem_iterations must be >= 1");
  }
  if (score_scale && !(*score_scale > 0)) {
    throw ConfigError("score_scale must be > 0");
  }
  if (eval_chunk < 1) throw ConfigError("eval_chunk must be >= 1");
}

CandidateBatch SampleActionSequences(const ActionPlan& mean,
                                     std::span<const double> stdev,
                                     double beta, double bound, int n_samples,
                                     Rng& rng) {
  const int horizon = mean.horizon, dim = mean.dim;
  const bool per_entry = stdev.size() == size_t(horizon) * dim;
  if (!per_entry && stdev.size() != size_t(dim)) {
    throw InvalidInputError("stdev must have dim or horizon * dim entries");
  }
  for (double m : mean.values) {
    if (!std::isfinite(m)) throw InvalidInputError("sampling mean is not finite");
  }
  CandidateBatch batch;
  batch.count = n_samples;
  batch.horizon = horizon;
  batch.dim = dim;
  batch.values.resize(size_t(n_samples) * horizon * dim);
  std::vector<double> noise(dim);
  for (int i = 0; i < n_samples; ++i) {
    std::fill(noise.begin(), noise.end(), 0.0);
    for (int t = 0; t < horizon; ++t) {
      for (int a = 0; a < dim; ++a) {
        const double sd = per_entry ? stdev[size_t(t) * dim + a] : stdev[a];
        const double u = rng.Normal() * sd;
        noise[a] = beta * u + (1.0 - beta) * noise[a];
        const double v = std::clamp(mean.at(t, a) + noise[a], -bound, bound);
        batch.values[(size_t(i) * horizon + t) * dim + a] = static_cast<float>(v);
      }
    }
  }
  return batch;
}

std::vector<double> MppiWeights(std::span<const double> scores, double gamma) {
  if (scores.empty()) throw PlannerError("no scores to weight");
  double best = kNegInf;
  for (double s : scores) {
    if (std::isnan(s) || s == std::numeric_limits<double>::infinity()) {
      throw PlannerError("scores must be finite or -inf");
    }
    best = std::max(best, s);
  }
  if (best == kNegInf) throw PlannerError("every score is -inf");
  std::vector<double> w(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    w[i] = scores[i] == kNegInf ? 0.0 : std::exp(gamma * (scores[i] - best));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

PlanStepResult OptimizeStep(CandidateEvaluator& evaluator,
                            const ActionPlan& warm_start,
                            const PlannerConfig& config, double action_bound,
                            Rng& rng, bool record_candidates) {
  if (warm_start.horizon != config.plan_horizon ||
      warm_start.dim != config.action_dim()) {
    throw InvalidInputError("warm start must be [plan_horizon x action_dim]");
  }
  const double beta = config.noise_correlation;
  PlanStepResult result;

  CandidateBatch batch = SampleActionSequences(
      warm_start, config.sample_stdev, beta, action_bound, config.n_samples, rng);
  evaluator.BeginStep(rng);
  CandidateScores scores = EvaluateChecked(evaluator, batch);

  switch (config.algorithm) {
    case PlannerAlgorithm::kMppi: {
      const double scale = config.score_scale.value_or(evaluator.DefaultScoreScale());
      std::vector<double> scaled(scores.scores);
      for (double& s : scaled) s *= scale;
      const auto w = MppiWeights(scaled, config.temperature);
      ActionPlan mean(batch.horizon, batch.dim);
      for (int i = 0; i < batch.count; ++i) {
        if (w[i] == 0.0) continue;
        auto c = batch.Candidate(i);
        for (size_t k = 0; k < c.size(); ++k) mean.values[k] += w[i] * c[k];
      }
      result.best = mean;
      result.new_mean = mean;
      break;
    }
    case PlannerAlgorithm::kCem: {
      const int n_elites = config.n_elites();
      ActionPlan mean = warm_start;
      for (int iter = 0;; ++iter) {
        std::vector<int> order(batch.count);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return scores.scores[a] > scores.scores[b];
        });
        mean = ActionPlan(batch.horizon, batch.dim);
        for (int e = 0; e < n_elites; ++e) {
          auto c = batch.Candidate(order[e]);
          for (size_t k = 0; k < c.size(); ++k) mean.values[k] += c[k];
        }
        for (double& m : mean.values) m /= n_elites;
        if (iter + 1 >= config.cem_iterations) break;
        std::vector<double> stdev(mean.values.size(), 0.0);
        for (int e = 0; e < n_elites; ++e) {
          auto c = batch.Candidate(order[e]);
          for (size_t k = 0; k < c.size(); ++k) {
            const double d = c[k] - mean.values[k];
            stdev[k] += d * d;
          }
        }
        for (double& s : stdev) s = std::sqrt(s / n_elites);
        batch = SampleActionSequences(mean, stdev, beta, action_bound,
                                      config.n_samples, rng);
        scores = EvaluateChecked(evaluator, batch);
      }
      result.best = mean;
      result.new_mean = mean;
      break;
    }
    case PlannerAlgorithm::kRandomShooting: {
      result.best = CandidateAsPlan(batch, ArgMax(scores.scores));
      result.new_mean = warm_start;
      break;
    }
  }

  FillStats(scores, result.stats);
  if (record_candidates) {
    CandidateLog log;
    log.costs = scores.costs;
    log.deltas = scores.deltas;
    log.scores = scores.scores;
    log.selected = ArgMax(scores.scores);
    result.stats.log = std::move(log);
  }
  return result;
}

ActionPlan ShiftWarmStart(const ActionPlan& plan) {
  ActionPlan next(plan.horizon, plan.dim);
  for (int t = 0; t + 1 < plan.horizon; ++t) {
    for (int a = 0; a < plan.dim; ++a) next.at(t, a) = plan.at(t + 1, a);
  }
  return next;
}

}  // namespace foresight

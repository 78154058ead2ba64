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

#include "foresight/metrics/reports.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fmt/format.h"
#include "foresight/common/errors.h"
#include "foresight/common/random.h"
#include "foresight/metrics/image_metrics.h"
#include "foresight/world/dataset.h"

namespace foresight {

using nlohmann::ordered_json;

ModelMetrics EvaluatePredictionMetrics(ForwardModel& model,
                                       const std::string& heldout_path,
                                       const WorldConfig& world,
                                       const MetricOptions& options) {
  if (options.n_sequences < 1) throw ConfigError("n_sequences must be >= 1");
  if (options.context_len < 1 || options.horizon < 1) {
    throw ConfigError("context_len and horizon must be >= 1");
  }
  DatasetReader reader(heldout_path);
  const DatasetHeader& h = reader.header();
  const int window = options.context_len + options.horizon;
  if (h.n_episodes == 0) throw InvalidInputError("held-out dataset is empty");
  if (static_cast<int>(h.traj_len) < window) {
    throw InvalidInputError(fmt::format(
        "held-out trajectories ({} frames) are shorter than T_c + T_plan = {}",
        h.traj_len, window));
  }
  if (h.action_dim != 2) throw InvalidInputError("held-out action_dim must be 2");

  Rng rng(options.seed);
  ModelMetrics out;
  out.model = model.name();
  const int tc = options.context_len;
  for (int i = 0; i < options.n_sequences; ++i) {
    SequenceMetrics seq;
    seq.episode = static_cast<int>(rng.UniformInt(h.n_episodes));
    seq.start = static_cast<int>(rng.UniformInt(h.traj_len - window + 1));
    const EpisodeRecord rec = reader.Read(seq.episode);

    PredictionRequest req;
    req.batch = 1;
    req.horizon = options.horizon;
    req.action_dim = 2;
    for (int t = 0; t < tc; ++t) req.context.push_back(rec.FrameAt(h, seq.start + t));
    const auto first = rec.actions.begin() + size_t(seq.start) * 2;
    req.actions.assign(first, first + size_t(req.action_len()) * 2);

    std::optional<HiddenStateToken> token;
    if (model.kind() != ModelKind::kRemote) {
      token = HiddenStateToken{RecoverState(h, rec, seq.start + tc - 1, world)};
    }
    PredictionResponse resp;
    try {
      resp = Predict(model, req, token ? &*token : nullptr);
    } catch (...) {
      RethrowWithContext(fmt::format("{} on held-out sequence {}", model.name(), i));
    }
    for (int t = 0; t < options.horizon; ++t) {
      const Frame truth = rec.FrameAt(h, seq.start + tc + t);
      const auto pred = resp.FrameAt(0, t);
      const double mse = Mse(pred, truth.data());
      seq.mse += mse;
      seq.psnr_db += PsnrFromMse(mse);
      seq.ssim += Ssim(pred, truth.data(), truth.height, truth.width);
    }
    seq.mse /= options.horizon;
    seq.psnr_db /= options.horizon;
    seq.ssim /= options.horizon;
    out.mse += seq.mse;
    out.psnr_db += seq.psnr_db;
    out.ssim += seq.ssim;
    out.sequences.push_back(seq);
  }
  out.mse /= options.n_sequences;
  out.psnr_db /= options.n_sequences;
  out.ssim /= options.n_sequences;
  return out;
}

namespace {

double SuccessRate(const std::vector<EpisodeResult>& results) {
  int n = 0;
  for (const auto& r : results) n += r.success;
  return results.empty() ? 0.0 : double(n) / results.size();
}

}  // namespace

ControlReport AggregateControl(const std::vector<EpisodeResult>& results,
                               const std::vector<EpisodeResult>* baseline,
                               const std::string& model_name) {
  if (results.empty()) throw InvalidInputError("no episode results to aggregate");
  ControlReport report;
  report.model = model_name;
  std::map<std::string, CategoryRate> by_category;
  for (const auto& r : results) {
    auto& c = by_category[r.category];
    c.category = r.category;
    ++c.episodes;
    c.successes += r.success;
    report.successes += r.success;
    report.errored += !r.diagnostics.error.empty();
  }
  for (auto& [name, c] : by_category) {
    c.rate = double(c.successes) / c.episodes;
    report.categories.push_back(c);
  }
  report.episodes = static_cast<int>(results.size());
  report.success_rate = double(report.successes) / report.episodes;
  if (baseline) {
    if (baseline->empty()) throw InvalidInputError("empty baseline results");
    report.baseline_rate = SuccessRate(*baseline);
    if (*report.baseline_rate > 0.0) {
      report.normalized_score = report.success_rate / *report.baseline_rate;
    } else {
      report.normalization_warning = true;
    }
  }
  report.results = results;
  return report;
}

uint64_t EpisodeSeed(uint64_t planner_seed, const std::string& task_id) {
  return DeriveSeed(planner_seed, "episode/" + task_id);
}

std::vector<EpisodeResult> RunControlBenchmark(
    ForwardModel& model, const std::vector<TaskInstance>& tasks,
    const BenchmarkSettings& settings) {
  std::vector<EpisodeResult> out;
  out.reserve(tasks.size());
  for (const auto& task : tasks) {
    Rng rng(EpisodeSeed(settings.planner.seed, task.id));
    out.push_back(RunEpisode(settings.world, model, settings.cost, task,
                             settings.planner, settings.mpc, rng));
  }
  return out;
}

namespace {

std::vector<double> AverageRanks(const std::vector<double>& v) {
  std::vector<size_t> idx(v.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * (double(i) + double(j)) + 1.0;
    for (size_t q = i; q <= j; ++q) ranks[idx[q]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> Spearman(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInputError("spearman: size mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = AverageRanks(x), ry = AverageRanks(y);
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

StudyReport BuildStudyReport(const MetricReport& metrics,
                             const std::vector<ControlReport>& control) {
  if (metrics.models.size() != control.size()) {
    throw InvalidInputError("metric and control reports cover different models");
  }
  StudyReport report;
  report.metrics = metrics;
  report.control = control;
  for (size_t i = 0; i < control.size(); ++i) {
    const auto& m = metrics.models[i];
    if (m.model != control[i].model) {
      throw InvalidInputError("metric and control reports are out of order");
    }
    report.rows.push_back({m.model, m.mse, m.psnr_db, m.ssim,
                           control[i].success_rate});
  }
  if (report.rows.size() < 2) return report;

  struct Metric {
    const char* name;
    bool higher_is_better;
    double StudyRow::*field;
  };
  const Metric all[] = {{"mse", false, &StudyRow::mse},
                        {"psnr", true, &StudyRow::psnr_db},
                        {"ssim", true, &StudyRow::ssim}};
  std::vector<double> success;
  for (const auto& r : report.rows) success.push_back(r.success);
  for (const auto& metric : all) {
    MetricCorrelation corr;
    corr.metric = metric.name;
    corr.higher_is_better = metric.higher_is_better;
    std::vector<double> values;
    for (const auto& r : report.rows) values.push_back(r.*metric.field);
    corr.spearman = Spearman(values, success);
    const double sign = metric.higher_is_better ? 1.0 : -1.0;
    for (size_t i = 0; i < report.rows.size(); ++i) {
      for (size_t j = i + 1; j < report.rows.size(); ++j) {
        const double dm = sign * (values[i] - values[j]);
        const double ds = success[i] - success[j];
        if (dm == 0.0 || ds == 0.0 || (dm > 0) == (ds > 0)) continue;
        corr.inverted = true;
        const auto& a = report.rows[i].model;
        const auto& b = report.rows[j].model;
        report.inversions.push_back(
            {metric.name, dm > 0 ? a : b, ds > 0 ? a : b});
      }
    }
    report.correlations.push_back(corr);
  }
  return report;
}

StudyReport RunStudy(const std::vector<ModelHandle>& zoo,
                     const std::vector<TaskInstance>& tasks,
                     const std::string& heldout_path,
                     const StudyOptions& options) {
  if (zoo.empty()) throw ConfigError("the model zoo is empty");
  if (tasks.empty()) throw InvalidInputError("no task instances");
  MetricReport metrics;
  std::vector<std::vector<EpisodeResult>> results;
  int baseline = -1;
  for (size_t i = 0; i < zoo.size(); ++i) {
    auto& model = *zoo[i];
    if (baseline < 0 && model.kind() == ModelKind::kOracle) baseline = int(i);
    metrics.models.push_back(EvaluatePredictionMetrics(
        model, heldout_path, options.bench.world, options.metrics));
    results.push_back(RunControlBenchmark(model, tasks, options.bench));
  }
  std::vector<ControlReport> control;
  for (size_t i = 0; i < zoo.size(); ++i) {
    control.push_back(AggregateControl(
        results[i], baseline >= 0 ? &results[baseline] : nullptr,
        zoo[i]->name()));
  }
  return BuildStudyReport(metrics, control);
}

namespace {

ordered_json Optional(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json Doubles(const std::vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr));
  return out;
}

ordered_json ToJson(const ModelMetrics& m) {
  ordered_json seqs = ordered_json::array();
  for (const auto& s : m.sequences) {
    seqs.push_back({{"episode", s.episode},
                    {"start", s.start},
                    {"mse", s.mse},
                    {"psnr_db", s.psnr_db},
                    {"ssim", s.ssim}});
  }
  return {{"model", m.model},
          {"mse", m.mse},
          {"psnr_db", m.psnr_db},
          {"ssim", m.ssim},
          {"sequences", seqs}};
}

}  // namespace

ordered_json ToJson(const MetricReport& report) {
  ordered_json models = ordered_json::array();
  for (const auto& m : report.models) models.push_back(ToJson(m));
  return {{"schema_version", kReportSchemaVersion}, {"models", models}};
}

ordered_json EpisodeToJson(const EpisodeResult& r) {
  ordered_json actions = ordered_json::array();
  for (const auto& a : r.actions) actions.push_back({a.delta.x, a.delta.y});
  ordered_json states = ordered_json::array();
  for (const auto& s : r.states) {
    ordered_json objs = ordered_json::array();
    for (const auto& o : s.objects) objs.push_back({o.pos.x, o.pos.y});
    states.push_back({{"pusher", {s.pusher_pos.x, s.pusher_pos.y}},
                      {"objects", objs}});
  }
  const auto& d = r.diagnostics;
  ordered_json diag = {{"best_score", Doubles(d.best_score)},
                       {"mean_score", Doubles(d.mean_score)},
                       {"score_stdev", Doubles(d.score_stdev)},
                       {"mean_delta", Doubles(d.mean_delta)},
                       {"scoring_index", d.scoring_index}};
  if (!d.candidates.empty()) {
    ordered_json logs = ordered_json::array();
    for (const auto& c : d.candidates) {
      logs.push_back({{"selected", c.selected},
                      {"costs", Doubles(c.costs)},
                      {"deltas", Doubles(c.deltas)},
                      {"scores", Doubles(c.scores)}});
    }
    diag["candidates"] = logs;
  }
  ordered_json out = {{"schema_version", kReportSchemaVersion},
                      {"task_id", r.task_id},
                      {"category", r.category},
                      {"success", r.success},
                      {"actions", actions},
                      {"states", states},
                      {"diagnostics", diag}};
  if (!d.error.empty()) out["error"] = d.error;
  return out;
}

ordered_json ToJson(const ControlReport& report, bool include_episodes) {
  ordered_json cats = ordered_json::array();
  for (const auto& c : report.categories) {
    cats.push_back({{"category", c.category},
                    {"successes", c.successes},
                    {"episodes", c.episodes},
                    {"rate", c.rate}});
  }
  ordered_json out = {{"schema_version", kReportSchemaVersion},
                      {"model", report.model},
                      {"success_rate", report.success_rate},
                      {"successes", report.successes},
                      {"episodes", report.episodes},
                      {"errored", report.errored},
                      {"baseline_rate", Optional(report.baseline_rate)},
                      {"normalized_score", Optional(report.normalized_score)},
                      {"normalization_warning", report.normalization_warning},
                      {"categories", cats}};
  if (include_episodes) {
    ordered_json eps = ordered_json::array();
    for (const auto& r : report.results) {
      eps.push_back({{"task_id", r.task_id},
                     {"category", r.category},
                     {"success", r.success},
                     {"error", r.diagnostics.error.empty()
                                   ? ordered_json(nullptr)
                                   : ordered_json(r.diagnostics.error)}});
    }
    out["episode_results"] = eps;
  }
  return out;
}

ordered_json ToJson(const StudyReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"model", r.model},
                    {"mse", r.mse},
                    {"psnr_db", r.psnr_db},
                    {"ssim", r.ssim},
                    {"success", r.success}});
  }
  ordered_json corr = ordered_json::array();
  for (const auto& c : report.correlations) {
    corr.push_back({{"metric", c.metric},
                    {"higher_is_better", c.higher_is_better},
                    {"spearman_vs_success", Optional(c.spearman)},
                    {"rank_inversion", c.inverted}});
  }
  ordered_json inv = ordered_json::array();
  for (const auto& i : report.inversions) {
    inv.push_back({{"metric", i.metric},
                   {"better_by_metric", i.better_by_metric},
                   {"better_by_success", i.better_by_success}});
  }
  ordered_json control = ordered_json::array();
  for (const auto& c : report.control) control.push_back(ToJson(c, true));
  return {{"schema_version", kReportSchemaVersion},
          {"rows", rows},
          {"correlations", corr},
          {"inversions", inv},
          {"metrics", ToJson(report.metrics)},
          {"control", control}};
}

std::string ControlCsv(const std::vector<ControlReport>& reports) {
  std::ostringstream out;
  out << "model,category,successes,episodes,rate\n";
  for (const auto& r : reports) {
    for (const auto& c : r.categories) {
      out << r.model << ',' << c.category << ',' << c.successes << ','
          << c.episodes << ',' << fmt::format("{}", c.rate) << '\n';
    }
    out << r.model << ",all," << r.successes << ',' << r.episodes << ','
        << fmt::format("{}", r.success_rate) << '\n';
  }
  return out.str();
}

std::string StudyCsv(const StudyReport& report) {
  std::ostringstream out;
  out << "model,mse,psnr_db,ssim,success\n";
  for (const auto& r : report.rows) {
    out << fmt::format("{},{},{},{},{}\n", r.model, r.mse, r.psnr_db, r.ssim,
                       r.success);
  }
  return out.str();
}

}  // namespace foresight

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

#include "foresight/bench/commands.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <memory>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "foresight/bench/zoo.h"
#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"
#include "foresight/common/random.h"
#include "foresight/metrics/reports.h"
#include "foresight/world/dataset.h"
#include "foresight/world/task_io.h"
#include "json.hpp"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace foresight {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void RequireOutput(const BenchConfig& config) {
  if (config.output_path.empty()) throw ConfigError("--out is required");
}

void WriteJson(const fs::path& path, const ordered_json& j) {
  WriteTextFile(path.string(), j.dump(2) + "\n");
}

ordered_json SnapshotJson(const BenchConfig& config) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : config.Snapshot()) out[k] = v;
  return out;
}

// Loads the task file and adopts its world configuration.
TaskSet LoadTasks(BenchConfig& config) {
  if (config.tasks_path.empty()) throw ConfigError("--tasks is required");
  TaskSet set = LoadTaskSet(config.tasks_path);
  if (set.instances.empty()) throw InvalidInputError("task file has no instances");
  config.world = set.config;
  return set;
}

void LoadClassifierIfNeeded(BenchConfig& config) {
  if (config.cost.kind != CostKind::kClassifierCombo) return;
  if (config.classifier_path.empty()) {
    throw ConfigError("cost classifier_combo needs --classifier");
  }
  config.cost.classifier = std::make_shared<ClassifierModel>(
      ClassifierModel::Load(config.classifier_path));
}

}  // namespace

int GenDataCommand(const BenchConfig& config) {
  config.Validate();
  RequireOutput(config);
  const auto t0 = Clock::now();
  CollectDataset(config.world, config.data, config.SeedFor("data"), config.output_path);
  spdlog::info("gen-data finished in {:.2f} s", SecondsSince(t0));
  fmt::print("wrote {} trajectories of {} frames ({}x{}) to {}\n",
             config.data.n_traj, config.data.traj_len,
             config.world.render_resolution, config.world.render_resolution,
             config.output_path);
  return kExitOk;
}

int GenTasksCommand(const BenchConfig& config) {
  config.Validate();
  RequireOutput(config);
  TaskSet set;
  set.config = config.world;
  set.instances = GenerateTaskInstances(config.world, config.SeedFor("tasks"), config.tasks);
  SaveTaskSet(config.output_path, set);
  fmt::print("wrote {} task instances ({} per category) to {}\n",
             set.instances.size(), config.tasks.n_per_category, config.output_path);
  return kExitOk;
}

int TrainClassifierCommand(const BenchConfig& config) {
  config.Validate();
  RequireOutput(config);
  if (config.dataset_path.empty()) throw ConfigError("--dataset is required");
  ParseCategory(config.classifier_category, config.world);
  const ClassifierModel model = TrainSuccessClassifier(
      config.dataset_path, config.classifier_category, config.classifier,
      config.SeedFor("classifier"));
  model.Save(config.output_path);
  fmt::print("trained {} classifier for {} steps, final loss {:.6f}, wrote {}\n",
             config.classifier_category, model.info().steps,
             model.info().final_loss, config.output_path);
  return kExitOk;
}

int RunCommand(const BenchConfig& base) {
  BenchConfig config = base;
  RequireOutput(config);
  const TaskSet set = LoadTasks(config);
  config.Validate();
  LoadClassifierIfNeeded(config);
  config.planner.seed = config.SeedFor("planner");

  // Everything that can fail for configuration or transport reasons happens
  // before the first output file is written.
  ModelHandle model = BuildConfiguredModel(config);
  spdlog::info("model {} ready, {} task instances", model->name(), set.instances.size());

  BenchmarkSettings settings{config.world, config.planner, config.mpc, config.cost};
  const auto t0 = Clock::now();
  std::vector<EpisodeResult> results;
  for (size_t i = 0; i < set.instances.size(); ++i) {
    const auto& task = set.instances[i];
    Rng rng(EpisodeSeed(config.planner.seed, task.id));
    results.push_back(RunEpisode(config.world, *model, config.cost, task,
                                 config.planner, config.mpc, rng));
    const auto& r = results.back();
    if (!r.diagnostics.error.empty()) {
      spdlog::error("{}: {}", task.id, r.diagnostics.error);
    }
    spdlog::debug("episode {}/{} {} success={}", i + 1, set.instances.size(),
                  task.id, r.success);
  }
  const double total_s = SecondsSince(t0);
  const ControlReport report = AggregateControl(results, nullptr, model->name());

  const fs::path out(config.output_path);
  fs::create_directories(out / "episodes");
  ordered_json episodes = ordered_json::array();
  ordered_json timings = ordered_json::array();
  for (const auto& r : results) {
    const std::string rel = "episodes/" + r.task_id + ".json";
    WriteJson(out / rel, EpisodeToJson(r));
    episodes.push_back(rel);
    double step_s = 0.0;
    for (double s : r.diagnostics.wall_time_s) step_s += s;
    timings.push_back({{"task_id", r.task_id},
                       {"wall_s", step_s},
                       {"steps", r.diagnostics.wall_time_s.size()}});
  }
  WriteJson(out / "control_report.json", ToJson(report, true));
  WriteTextFile((out / "control_report.csv").string(), ControlCsv({report}));
  WriteTextFile((out / "config.snapshot").string(), FormatFlatConfig(config.Snapshot()));
  WriteJson(out / "timings.json", {{"schema_version", kReportSchemaVersion},
                                   {"total_s", total_s},
                                   {"episodes", timings}});
  ordered_json manifest = {
      {"schema_version", kReportSchemaVersion},
      {"engine_version", kEngineVersion},
      {"command", "run"},
      {"model", model->name()},
      {"master_seed", config.master_seed},
      {"planner_seed", config.planner.seed},
      {"config", SnapshotJson(config)},
      {"outputs",
       {{"config_snapshot", "config.snapshot"},
        {"control_report", "control_report.json"},
        {"control_csv", "control_report.csv"},
        {"timings", "timings.json"},
        {"episodes", episodes}}}};
  WriteJson(out / "manifest.json", manifest);

  fmt::print("{}: success {}/{} ({:.1f}%), errored {}, {:.1f} s\n", model->name(),
             report.successes, report.episodes, 100.0 * report.success_rate,
             report.errored, total_s);
  return report.errored > 0 ? kExitBenchmarkFailure : kExitOk;
}

namespace {

// Zoo models, or the configured remote model when one is given.
std::vector<ModelHandle> BuildZoo(const BenchConfig& config) {
  std::vector<ModelHandle> zoo;
  if (!config.model.cmd.empty() || !config.model.addr.empty()) {
    zoo.push_back(BuildConfiguredModel(config));
    return zoo;
  }
  auto oracle = std::make_shared<OracleModel>(config.world);
  const auto entries = ParseZoo(config.zoo);
  for (size_t i = 0; i < entries.size(); ++i) {
    zoo.push_back(BuildZooModel(
        entries[i], oracle, config.SeedFor(fmt::format("zoo/{}/{}", entries[i].text, i))));
  }
  return zoo;
}

MetricOptions MetricOptionsFor(const BenchConfig& config) {
  MetricOptions m = config.metrics;
  m.context_len = config.planner.context_len;
  m.horizon = config.planner.plan_horizon;
  m.seed = config.SeedFor("metrics");
  return m;
}

}  // namespace

int EvalMetricsCommand(const BenchConfig& config) {
  config.Validate();
  RequireOutput(config);
  if (config.heldout_path.empty()) throw ConfigError("--heldout is required");
  const auto zoo = BuildZoo(config);
  MetricReport report;
  for (const auto& model : zoo) {
    report.models.push_back(EvaluatePredictionMetrics(
        *model, config.heldout_path, config.world, MetricOptionsFor(config)));
    const auto& m = report.models.back();
    fmt::print("{:<16} mse {:.6f}  psnr {:.3f} dB  ssim {:.6f}\n", m.model,
               m.mse, m.psnr_db, m.ssim);
  }
  WriteJson(config.output_path, ToJson(report));
  return kExitOk;
}

int StudyCommand(const BenchConfig& base) {
  BenchConfig config = base;
  RequireOutput(config);
  if (config.heldout_path.empty()) throw ConfigError("--heldout is required");
  const TaskSet set = LoadTasks(config);
  config.Validate();
  LoadClassifierIfNeeded(config);
  config.planner.seed = config.SeedFor("planner");
  const auto zoo = BuildZoo(config);

  StudyOptions options;
  options.bench = {config.world, config.planner, config.mpc, config.cost};
  options.metrics = MetricOptionsFor(config);
  const auto t0 = Clock::now();
  const StudyReport report = RunStudy(zoo, set.instances, config.heldout_path, options);
  const double total_s = SecondsSince(t0);

  const fs::path out(config.output_path);
  fs::create_directories(out);
  WriteJson(out / "study_report.json", ToJson(report));
  WriteTextFile((out / "study_report.csv").string(), StudyCsv(report));
  WriteTextFile((out / "control_report.csv").string(), ControlCsv(report.control));
  WriteTextFile((out / "config.snapshot").string(), FormatFlatConfig(config.Snapshot()));
  WriteJson(out / "timings.json", {{"schema_version", kReportSchemaVersion},
                                   {"total_s", total_s}});
  WriteJson(out / "manifest.json",
            {{"schema_version", kReportSchemaVersion},
             {"engine_version", kEngineVersion},
             {"command", "study"},
             {"master_seed", config.master_seed},
             {"config", SnapshotJson(config)},
             {"outputs",
              {{"config_snapshot", "config.snapshot"},
               {"study_report", "study_report.json"},
               {"study_csv", "study_report.csv"},
               {"control_csv", "control_report.csv"},
               {"timings", "timings.json"}}}});

  fmt::print("{:<16} {:>10} {:>10} {:>8} {:>8}\n", "model", "mse", "psnr_db", "ssim", "success");
  for (const auto& r : report.rows) {
    fmt::print("{:<16} {:>10.6f} {:>10.3f} {:>8.4f} {:>8.3f}\n", r.model, r.mse,
               r.psnr_db, r.ssim, r.success);
  }
  for (const auto& c : report.correlations) {
    fmt::print("spearman({}, success) = {}{}\n", c.metric,
               c.spearman ? fmt::format("{:.3f}", *c.spearman) : "null",
               c.inverted ? "  [rank inversion]" : "");
  }
  int errored = 0;
  for (const auto& c : report.control) errored += c.errored;
  return errored > 0 ? kExitBenchmarkFailure : kExitOk;
}

void ConfigureLogging() {
  auto logger = spdlog::get("foresight");
  if (!logger) logger = spdlog::stderr_color_mt("foresight");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("VP2_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("VP2_LOG='{}' not recognized, using info", level);
  }
}

namespace {

struct Flags {
  std::string config_path;
  SettingMap overrides;
};

void Key(CLI::App* app, Flags& flags, const std::string& name,
         const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.overrides[key] = v; },
      help);
}

void CommonFlags(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config_path,
                  "key = value or JSON config file (flags take precedence)");
  Key(app, flags, "--seed", "seed", "master seed");
  Key(app, flags, "--out", "output", "output path");
}

void PlannerFlags(CLI::App* app, Flags& flags) {
  Key(app, flags, "--tasks", "tasks.path", "task-instance JSON file");
  Key(app, flags, "--algorithm", "planner.algorithm", "mppi, cem or random_shooting");
  Key(app, flags, "--gamma", "planner.gamma", "MPPI scaling factor");
  Key(app, flags, "--beta", "planner.beta", "sampling noise correlation");
  Key(app, flags, "--n-samples", "planner.n_samples", "candidates per step");
  Key(app, flags, "--horizon", "planner.horizon", "planning horizon T_plan");
  Key(app, flags, "--sample-stdev", "planner.sample_stdev", "sampling stdev (1 or 2 values)");
  Key(app, flags, "--score-scale", "planner.score_scale", "'auto' or a number");
  Key(app, flags, "--episode-len", "mpc.episode_len", "control steps per episode");
  Key(app, flags, "--cost", "cost.kind", "pixel_mse or classifier_combo");
  Key(app, flags, "--classifier", "cost.classifier", "classifier file for classifier_combo");
  Key(app, flags, "--lambda", "cost.lambda", "ensemble disagreement penalty");
  app->add_flag_function(
      "--record-candidates",
      [&flags](int64_t) { flags.overrides["mpc.record_candidates"] = "true"; },
      "log every candidate's cost, delta and score");
}

void ModelFlags(CLI::App* app, Flags& flags) {
  Key(app, flags, "--model-kind", "model.kind", "oracle, blur:<px>, noise:<sd>, action_blind, lagged");
  Key(app, flags, "--model-cmd", "model.cmd", "spawn a remote model speaking the protocol on stdio");
  Key(app, flags, "--model-addr", "model.addr", "connect to a remote model at host:port");
  Key(app, flags, "--model-timeout", "model.timeout_s", "remote model timeout in seconds");
  Key(app, flags, "--ensemble", "model.ensemble", "ensemble size N");
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"Visual-foresight MPC benchmark", "foresight"};
  app.require_subcommand(1);
  Flags flags;

  auto* gen_data = app.add_subcommand("gen-data", "collect a scripted-policy dataset");
  CommonFlags(gen_data, flags);
  Key(gen_data, flags, "--n-traj", "data.n_traj", "number of trajectories");
  Key(gen_data, flags, "--noise-sigma", "data.noise_sigma", "action noise stdev");
  Key(gen_data, flags, "--traj-len", "data.traj_len", "frames per trajectory");

  auto* gen_tasks = app.add_subcommand("gen-tasks", "generate benchmark task instances");
  CommonFlags(gen_tasks, flags);
  Key(gen_tasks, flags, "--n-per-category", "tasks.n_per_category", "instances per category");

  auto* train = app.add_subcommand("train-classifier", "train a success classifier");
  CommonFlags(train, flags);
  Key(train, flags, "--dataset", "data.path", "dataset file");
  Key(train, flags, "--category", "classifier.category", "task category, e.g. push_object_0");
  Key(train, flags, "--steps", "classifier.steps", "SGD steps");
  Key(train, flags, "--lr", "classifier.learning_rate", "learning rate");
  Key(train, flags, "--batch-size", "classifier.batch_size", "minibatch size");

  auto* run = app.add_subcommand("run", "run the control benchmark for one model");
  CommonFlags(run, flags);
  PlannerFlags(run, flags);
  ModelFlags(run, flags);

  auto* eval = app.add_subcommand("eval-metrics", "MSE/PSNR/SSIM on held-out data");
  CommonFlags(eval, flags);
  ModelFlags(eval, flags);
  Key(eval, flags, "--zoo", "study.zoo", "comma list, e.g. oracle,blur:2.0,action_blind");
  Key(eval, flags, "--heldout", "metrics.heldout", "held-out dataset file");
  Key(eval, flags, "--n-sequences", "metrics.n_sequences", "windows to evaluate");
  Key(eval, flags, "--horizon", "planner.horizon", "predicted frames per window");

  auto* study = app.add_subcommand("study", "metric-vs-control study over a model zoo");
  CommonFlags(study, flags);
  PlannerFlags(study, flags);
  Key(study, flags, "--zoo", "study.zoo", "comma list, e.g. oracle,blur:2.0,action_blind");
  Key(study, flags, "--heldout", "metrics.heldout", "held-out dataset file");
  Key(study, flags, "--n-sequences", "metrics.n_sequences", "windows to evaluate");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    BenchConfig config;
    if (!flags.config_path.empty()) config.Apply(LoadConfigFile(flags.config_path));
    config.Apply(flags.overrides);
    if (*gen_data) return GenDataCommand(config);
    if (*gen_tasks) return GenTasksCommand(config);
    if (*train) return TrainClassifierCommand(config);
    if (*run) return RunCommand(config);
    if (*eval) return EvalMetricsCommand(config);
    if (*study) return StudyCommand(config);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace foresight

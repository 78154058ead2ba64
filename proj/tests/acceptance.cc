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

// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "foresight/bench/commands.h"
#include "foresight/bench/config.h"
#include "foresight/bench/zoo.h"
#include "foresight/common/binary_io.h"
#include "foresight/common/random.h"
#include "foresight/costs/costs.h"
#include "foresight/metrics/image_metrics.h"
#include "foresight/metrics/reports.h"
#include "foresight/models/oracle.h"
#include "foresight/models/remote.h"
#include "foresight/models/server.h"
#include "foresight/models/transport.h"
#include "foresight/planning/mpc.h"
#include "foresight/world/tasks.h"
#include "json.hpp"
#include "test_util.h"
#include "toy_problem.h"

namespace foresight {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json ReadJson(const std::string& path) { return json::parse(ReadTextFile(path)); }

void MustRun(const std::vector<std::string>& args) {
  const int code = RunCli(args);
  if (code != kExitOk) {
    throw std::runtime_error(fmt::format("foresight {} exited with {}", args[0], code));
  }
}

std::map<std::string, std::vector<uint8_t>> Tree(const fs::path& root) {
  std::map<std::string, std::vector<uint8_t>> out;
  if (fs::is_regular_file(root)) {
    out[""] = ReadFileBytes(root.string());
    return out;
  }
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "timings.json") continue;
    out[fs::relative(e.path(), root).string()] = ReadFileBytes(e.path().string());
  }
  return out;
}

// ---- 1: oracle upper bound ----

Outcome OracleUpperBound(const testing::TempDir& dir) {
  MustRun({"gen-tasks", "--seed", "0", "--out", dir / "tasks.json"});
  const auto t0 = Clock::now();
  RunCli({"run", "--tasks", dir / "tasks.json", "--seed", "0", "--out", dir / "run"});
  const double wall = Seconds(t0);
  const json report = ReadJson(dir / "run/control_report.json");
  const double rate = report["success_rate"];
  const int episodes = report["episodes"];
  const bool pass = episodes == 100 && rate >= 0.9 && wall <= 600.0;
  return {pass, fmt::format("success {}/{} = {:.1f}% (need >= 90%), runtime {:.0f} s (need <= 600 s)",
                            report["successes"].get<int>(), episodes, 100 * rate, wall)};
}

// ---- 2: metric/control rank inversion ----

Outcome RankInversionStudy(const testing::TempDir& dir, int n_seeds) {
  int holds = 0;
  std::string detail;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    const std::string s = std::to_string(seed);
    const std::string sub = dir / ("seed" + s);
    MustRun({"gen-data", "--n-traj", "100", "--seed", s, "--out", sub + "/heldout.vpds"});
    MustRun({"gen-tasks", "--seed", s, "--out", sub + "/tasks.json"});
    MustRun({"study", "--zoo", "oracle,blur:2.0,action_blind", "--heldout",
             sub + "/heldout.vpds", "--tasks", sub + "/tasks.json", "--seed", s,
             "--out", sub + "/study"});
    const json report = ReadJson(sub + "/study/study_report.json");
    // rows follow zoo order
    const json& blur = report["rows"].at(1);
    const json& blind = report["rows"].at(2);
    const double gap = blur["success"].get<double>() - blind["success"].get<double>();
    const bool ssim_ok = blind["ssim"].get<double>() >= blur["ssim"].get<double>();
    const bool flagged = !report["inversions"].empty();
    const bool ok = ssim_ok && gap >= 0.30 && flagged;
    holds += ok;
    detail += fmt::format(" [seed {}: ssim blind {:.4f} vs blur {:.4f}, success blur {:.2f} vs blind {:.2f}, "
                          "inversions {}]",
                          seed, blind["ssim"].get<double>(), blur["ssim"].get<double>(),
                          blur["success"].get<double>(), blind["success"].get<double>(),
                          report["inversions"].size());
  }
  return {holds >= (4 * n_seeds + 4) / 5,
          fmt::format("holds for {}/{} seeds (need >= 4/5);{}", holds, n_seeds, detail)};
}

// ---- 3: toy planner ----

Outcome ToyPlanner() {
  constexpr int kSeeds = 20;
  bool pass = true;
  std::string detail;
  for (auto [algorithm, tolerance] :
       {std::pair{PlannerAlgorithm::kMppi, 0.1}, std::pair{PlannerAlgorithm::kCem, 0.1},
        std::pair{PlannerAlgorithm::kRandomShooting, 0.2}}) {
    double mean = 0.0;
    for (int s = 0; s < kSeeds; ++s) mean += testing::SolveToy(algorithm, s) / kSeeds;
    const bool ok = std::abs(mean - 1.0) <= tolerance;
    pass &= ok;
    detail += fmt::format(" {} {:.4f} (+-{})", PlannerAlgorithmName(algorithm), mean, tolerance);
  }
  return {pass, "mean action sum over 20 seeds:" + detail};
}

// ---- 4 and 5: ensembles ----

std::vector<TaskInstance> SmallTaskSet(const BenchConfig& config) {
  TaskGenerationOptions options;
  options.n_per_category = 2;
  return GenerateTaskInstances(config.world, config.SeedFor("tasks"), options);
}

std::vector<EpisodeResult> RunAll(const BenchConfig& config, ForwardModel& model,
                                  const std::vector<TaskInstance>& tasks) {
  std::vector<EpisodeResult> out;
  for (const auto& task : tasks) {
    Rng rng(EpisodeSeed(config.SeedFor("planner"), task.id));
    out.push_back(RunEpisode(config.world, model, config.cost, task, config.planner,
                             config.mpc, rng));
    if (!out.back().diagnostics.error.empty()) {
      throw std::runtime_error(task.id + ": " + out.back().diagnostics.error);
    }
  }
  return out;
}

Outcome EnsembleIdentity() {
  BenchConfig config;
  config.Apply({{"model.kind", "oracle"}, {"cost.lambda", "0.01"}});
  const auto tasks = SmallTaskSet(config);
  auto single = BuildConfiguredModel(config);
  const auto a = RunAll(config, *single, tasks);
  config.Apply({{"model.ensemble", "4"}});
  auto ensemble = BuildConfiguredModel(config);
  const auto b = RunAll(config, *ensemble, tasks);
  int identical = 0;
  bool zero_delta = true;
  for (size_t i = 0; i < tasks.size(); ++i) {
    bool same = a[i].actions.size() == b[i].actions.size();
    for (size_t t = 0; same && t < a[i].actions.size(); ++t) {
      same = a[i].actions[t].delta.x == b[i].actions[t].delta.x &&
             a[i].actions[t].delta.y == b[i].actions[t].delta.y;
    }
    identical += same;
    for (double d : b[i].diagnostics.mean_delta) zero_delta &= d == 0.0;
  }
  const int n = static_cast<int>(tasks.size());
  return {identical == n && zero_delta,
          fmt::format("{}/{} episodes bit-identical, delta == 0 throughout: {}", identical, n,
                      zero_delta ? "yes" : "no")};
}

Outcome EnsemblePenalty() {
  BenchConfig config;
  config.Apply({{"model.kind", "noise:0.05"}, {"model.ensemble", "4"}, {"cost.lambda", "0.01"},
                {"mpc.record_candidates", "true"}});
  const auto tasks = SmallTaskSet(config);
  auto model = BuildConfiguredModel(config);
  double delta_sum = 0.0;
  int delta_steps = 0, steps = 0, outliers = 0, violations = 0;
  std::string sweep, example;
  for (const char* gamma : {"0.01", "0.03", "0.05"}) {
    config.Apply({{"planner.gamma", gamma}});
    const auto results = RunAll(config, *model, tasks);
    int successes = 0;
    for (const auto& r : results) {
      successes += r.success;
      for (double d : r.diagnostics.mean_delta) delta_sum += d, ++delta_steps;
      for (const auto& log : r.diagnostics.candidates) {
        ++steps;
        const size_t n = log.deltas.size();
        double mean = 0.0, var = 0.0;
        for (double d : log.deltas) mean += d / n;
        for (double d : log.deltas) var += (d - mean) * (d - mean) / n;
        const double limit = mean + 3.0 * std::sqrt(var);
        const int s = log.selected;
        if (log.deltas[s] <= limit) continue;
        ++outliers;
        for (size_t j = 0; j < n; ++j) {
          if (static_cast<int>(j) != s && log.deltas[j] <= limit &&
              log.costs[j] <= log.costs[s] + 0.005 * std::abs(log.costs[s])) {
            if (violations++ == 0) {
              example = fmt::format(" first: selected cost {:.6f} delta {:.4f}, alternative cost {:.6f} delta {:.4f};",
                                    log.costs[s], log.deltas[s], log.costs[j], log.deltas[j]);
            }
            break;
          }
        }
      }
    }
    sweep += fmt::format(" gamma={} ok ({}/{} success);", gamma, successes, results.size());
  }
  const double mean_delta = delta_sum / std::max(delta_steps, 1);
  return {mean_delta > 0.0 && violations == 0 && steps > 0,
          fmt::format("mean delta {:.3e} (need > 0); {} logged steps, {} selected outliers, "
                      "{} with an in-range alternative within 0.5% cost (need 0);{}{}",
                      mean_delta, steps, outliers, violations, example, sweep)};
}

// ---- 6: metric goldens ----

Outcome MetricGoldens() {
  Rng rng(6);
  Frame x(64, 64);
  for (auto& v : x.pixels) v = static_cast<float>(rng.Uniform(0.0, 1.0));
  const double ssim_self = Ssim(x, x);
  const double psnr = PsnrFromMse(0.01);
  Frame a(64, 64), b(64, 64);
  std::fill(a.pixels.begin(), a.pixels.end(), 0.2f);
  std::fill(b.pixels.begin(), b.pixels.end(), 0.8f);
  const double ma = 0.2f, mb = 0.8f;
  const double closed = (2 * ma * mb + kSsimC1) / (ma * ma + mb * mb + kSsimC1);
  const double ssim_const = Ssim(a, b);
  Frame zeros(64, 64);
  std::vector<float> ones(zeros.size() * 10, 1.0f);
  const double cost = PixelMseCost(ones, 10, zeros);
  const bool pass = std::abs(ssim_self - 1.0) <= 1e-9 && std::abs(psnr - 20.0) <= 1e-6 &&
                    std::abs(ssim_const - closed) <= 1e-6 && cost == 10.0;
  return {pass, fmt::format("ssim(x,x) = {:.12f}, psnr(0.01) = {:.9f} dB, constant ssim {:.9f} vs "
                            "{:.9f}, pixel cost {}",
                            ssim_self, psnr, ssim_const, closed, cost)};
}

// ---- 7: determinism ----

Outcome Determinism(const testing::TempDir& dir) {
  std::string detail;
  bool pass = true;
  auto twice = [&](const std::string& name, std::vector<std::string> args, const std::string& out) {
    auto a = args, b = args;
    a.insert(a.end(), {"--out", dir / ("a_" + out)});
    b.insert(b.end(), {"--out", dir / ("b_" + out)});
    MustRun(a);
    MustRun(b);
    const bool same = Tree(dir / ("a_" + out)) == Tree(dir / ("b_" + out));
    pass &= same;
    detail += fmt::format("{} {}; ", name, same ? "identical" : "DIFFERS");
  };
  twice("gen-data", {"gen-data", "--n-traj", "20", "--seed", "7"}, "data.vpds");
  twice("gen-tasks", {"gen-tasks", "--n-per-category", "2", "--seed", "7"}, "tasks.json");
  twice("run", {"run", "--tasks", dir / "a_tasks.json", "--seed", "7"}, "run");

  const WorldConfig world;
  auto oracle = std::make_shared<OracleModel>(world);
  LoopbackOracleServedModel served(oracle, 64);
  auto [client, server_end] = MakeTransportPair();
  std::thread server([&, s = server_end.get()] { Serve(*s, served); });
  int equal = 0;
  constexpr int kRequests = 100;
  {
    auto remote = RemoteHandshake(std::move(client), protocol::Signature());
    Rng rng(77);
    for (int i = 0; i < kRequests; ++i) {
      SimState state = SampleInitialState(world, rng);
      const SimState before = state;
      state = Step(state, {{float(rng.Uniform(-0.08, 0.08)), float(rng.Uniform(-0.08, 0.08))}},
                   world);
      served.RegisterState(state);
      PredictionRequest req;
      req.context = {Render(before, world), Render(state, world)};
      req.batch = 1 + static_cast<int>(rng.UniformInt(100));
      req.horizon = 10;
      req.action_dim = 2;
      req.actions.resize(size_t(req.batch) * req.action_len() * 2);
      for (auto& v : req.actions) v = static_cast<float>(rng.Uniform(-0.1, 0.1));
      const HiddenStateToken token{state};
      equal += Predict(*remote, req, nullptr) == Predict(*oracle, req, &token);
    }
  }
  server.join();
  pass &= equal == kRequests;
  detail += fmt::format("loopback == in-process on {}/{} requests", equal, kRequests);
  return {pass, detail};
}

// ---- 8: MPPI weight law ----

Outcome MppiWeightLaw() {
  const std::vector<double> scores = {0.0, -1.0};
  const auto w = MppiWeights(scores, 0.05);
  const bool closed = std::abs(w[0] - 0.5125) <= 1e-4 && std::abs(w[1] - 0.4875) <= 1e-4;
  Rng rng(8);
  int invariant = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng.UniformInt(199));
    const double gamma = rng.Uniform(0.01, 1.0);
    const double shift = rng.Uniform(-1000.0, 1000.0);
    std::vector<double> s(n), shifted(n);
    for (int k = 0; k < n; ++k) {
      s[k] = rng.Uniform(-100.0, 0.0);
      shifted[k] = s[k] + shift;
    }
    const auto a = MppiWeights(s, gamma), b = MppiWeights(shifted, gamma);
    double err = 0.0;
    for (int k = 0; k < n; ++k) err = std::max(err, std::abs(a[k] - b[k]));
    worst = std::max(worst, err);
    invariant += err <= 1e-12;
  }
  return {closed && invariant == 1000,
          fmt::format("w = [{:.6f}, {:.6f}]; shift-invariant on {}/1000 vectors (max |dw| {:.2e})",
                      w[0], w[1], invariant, worst)};
}

}  // namespace
}  // namespace foresight

int main(int argc, char** argv) {
  using namespace foresight;
  CLI::App app("foresight acceptance suite");
  std::vector<int> only;
  int n_seeds = 5;
  app.add_option("--only", only, "criteria to run (1-8)");
  app.add_option("--seeds", n_seeds, "master seeds for the rank-inversion study")->check(CLI::Range(1, 100));
  CLI11_PARSE(app, argc, argv);
  setenv("VP2_LOG", "error", 0);
  ConfigureLogging();

  testing::TempDir dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle upper bound", [&] { return OracleUpperBound(dir); }},
      {"metric/control rank inversion", [&] { return RankInversionStudy(dir, n_seeds); }},
      {"planner on analytic toy", [] { return ToyPlanner(); }},
      {"ensemble no-op identity", [] { return EnsembleIdentity(); }},
      {"ensemble penalty effect", [] { return EnsemblePenalty(); }},
      {"metric golden values", [] { return MetricGoldens(); }},
      {"determinism", [&] { return Determinism(dir); }},
      {"MPPI weight law", [] { return MppiWeightLaw(); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("error: {}", e.what())};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !outcome.pass;
    fmt::print("{} {}. {}: {} ({:.1f} s)\n", outcome.pass ? "PASS" : "FAIL", id,
               criteria[i].first, outcome.detail, s);
    std::fflush(stdout);
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

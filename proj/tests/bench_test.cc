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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "foresight/bench/commands.h"
#include "foresight/bench/config.h"
#include "foresight/bench/zoo.h"
#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"
#include "foresight/costs/classifier.h"
#include "foresight/models/ensemble.h"
#include "foresight/world/dataset.h"
#include "foresight/world/task_io.h"
#include "json.hpp"
#include "test_util.h"

namespace foresight {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

int Cli(std::vector<std::string> args) { return RunCli(args); }

// Every file under `root` (relative path -> bytes), optionally skipping one name.
std::map<std::string, std::vector<uint8_t>> Tree(const fs::path& root,
                                                 const std::string& skip = "") {
  std::map<std::string, std::vector<uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    if (!skip.empty() && e.path().filename() == skip) continue;
    out[fs::relative(e.path(), root).string()] = ReadFileBytes(e.path().string());
  }
  return out;
}

int Shell(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(FlatConfigTest, ParsesKeysCommentsAndBlanks) {
  const auto m = ParseFlatConfig("# header\nplanner.n_samples = 50\n\n  seed=7  # trailing\n");
  EXPECT_EQ(m.at("planner.n_samples"), "50");
  EXPECT_EQ(m.at("seed"), "7");
  EXPECT_EQ(m.size(), 2u);
  EXPECT_THROW(ParseFlatConfig("no equals sign\n"), ConfigError);
}

TEST(FlatConfigTest, JsonIsFlattened) {
  const auto m = FlattenJsonConfig(R"({"planner": {"n_samples": 50, "sample_stdev": [0.1, 0.2]}, "seed": 3})");
  EXPECT_EQ(m.at("planner.n_samples"), "50");
  EXPECT_EQ(m.at("seed"), "3");
  BenchConfig c;
  c.Apply(m);
  EXPECT_EQ(c.planner.n_samples, 50);
  EXPECT_EQ(c.planner.sample_stdev, (std::vector<double>{0.1, 0.2}));
}

TEST(BenchConfigTest, DefaultsMatchDocumentedValues) {
  const BenchConfig c;
  EXPECT_EQ(c.planner.n_samples, 200);
  EXPECT_DOUBLE_EQ(c.planner.temperature, 0.05);
  EXPECT_DOUBLE_EQ(c.planner.noise_correlation, 0.5);
  EXPECT_EQ(c.planner.plan_horizon, 10);
  EXPECT_EQ(c.planner.context_len, 2);
  EXPECT_EQ(c.mpc.episode_len, 15);
  EXPECT_EQ(c.data.n_traj, 5000);
  EXPECT_EQ(c.data.traj_len, 35);
  EXPECT_EQ(c.tasks.n_per_category, 25);
  EXPECT_EQ(c.classifier.steps, 3000);
  EXPECT_DOUBLE_EQ(c.cost.penalty_lambda, 0.01);
  EXPECT_DOUBLE_EQ(c.cost.classifier_weight, 10.0);
  EXPECT_EQ(c.model.timeout_s, 30.0);
}

TEST(BenchConfigTest, UnknownAndMalformedKeysRejected) {
  BenchConfig c;
  EXPECT_THROW(c.Apply({{"planner.n_sampels", "5"}}), ConfigError);
  EXPECT_THROW(c.Apply({{"planner.n_samples", "five"}}), ConfigError);
  EXPECT_THROW(c.Apply({{"planner.gamma", "nan"}}), ConfigError);
  EXPECT_THROW(c.Apply({{"planner.algorithm", "gradient"}}), ConfigError);
  EXPECT_THROW(c.Apply({{"mpc.record_candidates", "maybe"}}), ConfigError);
}

TEST(BenchConfigTest, ComboPixelWeightDefault) {
  BenchConfig c;
  c.Apply({{"cost.kind", "classifier_combo"}});
  EXPECT_DOUBLE_EQ(c.cost.pixel_weight, 0.5);
  c.Apply({{"cost.pixel_weight", "0.25"}});
  EXPECT_DOUBLE_EQ(c.cost.pixel_weight, 0.25);
  BenchConfig d;
  d.Apply({{"cost.pixel_weight", "0.25"}, {"cost.kind", "classifier_combo"}});
  EXPECT_DOUBLE_EQ(d.cost.pixel_weight, 0.25);
}

TEST(BenchConfigTest, ScoreScale) {
  BenchConfig c;
  EXPECT_FALSE(c.planner.score_scale);
  c.Apply({{"planner.score_scale", "1"}});
  EXPECT_EQ(c.planner.score_scale, 1.0);
  c.Apply({{"planner.score_scale", "auto"}});
  EXPECT_FALSE(c.planner.score_scale);
}

TEST(BenchConfigTest, SnapshotRoundTripsAndSkipsOutput) {
  BenchConfig c;
  c.Apply({{"planner.n_samples", "31"}, {"seed", "9"}, {"output", "/tmp/x"},
           {"planner.sample_stdev", "0.03,0.05"}, {"world.render_resolution", "32"}});
  const auto snap = c.Snapshot();
  EXPECT_EQ(snap.count("output"), 0u);
  BenchConfig d;
  d.Apply(ParseFlatConfig(FormatFlatConfig(snap)));
  EXPECT_EQ(d.Snapshot(), snap);
  EXPECT_EQ(d.planner.n_samples, 31);
  EXPECT_EQ(d.world.render_resolution, 32);
}

TEST(BenchConfigTest, ValidateCatchesNestedInvariants) {
  BenchConfig c;
  c.Apply({{"planner.beta", "2"}});
  EXPECT_THROW(c.Validate(), ConfigError);
  BenchConfig e;
  e.Apply({{"model.ensemble", "0"}});
  EXPECT_THROW(e.Validate(), ConfigError);
  BenchConfig both;
  both.Apply({{"model.cmd", "x"}, {"model.addr", "127.0.0.1:1"}});
  EXPECT_THROW(both.Validate(), ConfigError);
}

TEST(BenchConfigTest, SeedsAreLabelled) {
  BenchConfig c;
  c.master_seed = 5;
  EXPECT_EQ(c.SeedFor("planner"), DeriveSeed(5, "planner"));
  EXPECT_NE(c.SeedFor("planner"), c.SeedFor("data"));
}

TEST(ZooTest, ParsesEntries) {
  const auto zoo = ParseZoo("oracle,blur:2.0,noise:0.1,pixel_noise:0.2,action_blind,lagged");
  ASSERT_EQ(zoo.size(), 6u);
  EXPECT_FALSE(zoo[0].degradation);
  EXPECT_EQ(zoo[1].degradation, DegradationKind::kBlur);
  EXPECT_EQ(zoo[1].strength, 2.0);
  EXPECT_EQ(zoo[2].degradation, DegradationKind::kPixelNoise);
  EXPECT_EQ(zoo[3].strength, 0.2);
  EXPECT_EQ(zoo[4].degradation, DegradationKind::kActionBlind);
  EXPECT_EQ(zoo[5].degradation, DegradationKind::kLagged);
  EXPECT_EQ(zoo[1].text, "blur:2.0");
}

TEST(ZooTest, MalformedEntriesRejected) {
  for (const char* bad : {"", "oracle,,blur:1", "blur", "blur:", "blur:x", "blur:-1",
                          "noise", "oracle:1", "action_blind:2", "sharpen:1", "lagged:0"}) {
    EXPECT_THROW(ParseZoo(bad), ConfigError) << bad;
  }
}

TEST(ZooTest, ConfiguredEnsembles) {
  BenchConfig c;
  c.Apply({{"model.kind", "oracle"}, {"model.ensemble", "4"}});
  auto model = BuildConfiguredModel(c);
  auto* ens = dynamic_cast<EnsembleModel*>(model.get());
  ASSERT_NE(ens, nullptr);
  EXPECT_EQ(ens->size(), 4);
  EXPECT_EQ(ens->members()[0], ens->members()[3]);

  c.Apply({{"model.kind", "noise:0.05"}});
  auto noisy = BuildConfiguredModel(c);
  auto* nens = dynamic_cast<EnsembleModel*>(noisy.get());
  ASSERT_NE(nens, nullptr);
  EXPECT_NE(nens->members()[0], nens->members()[1]);
}

TEST(ZooTest, UnreachableAddressIsConnectionError) {
  BenchConfig c;
  c.Apply({{"model.addr", "127.0.0.1:1"}, {"model.timeout_s", "2"}});
  EXPECT_THROW(BuildConfiguredModel(c), ConnectionError);
}

class CliTest : public ::testing::Test {
 protected:
  TempDir dir_{"cli"};
  std::string P(const std::string& name) { return dir_ / name; }
};

TEST_F(CliTest, GenDataIsDeterministic) {
  ASSERT_EQ(Cli({"gen-data", "--n-traj", "10", "--seed", "1", "--out", P("a.vpds")}), 0);
  ASSERT_EQ(Cli({"gen-data", "--n-traj", "10", "--seed", "1", "--out", P("b.vpds")}), 0);
  ASSERT_EQ(Cli({"gen-data", "--n-traj", "10", "--seed", "2", "--out", P("c.vpds")}), 0);
  EXPECT_EQ(ReadFileBytes(P("a.vpds")), ReadFileBytes(P("b.vpds")));
  EXPECT_NE(ReadFileBytes(P("a.vpds")), ReadFileBytes(P("c.vpds")));
  DatasetReader reader(P("a.vpds"));
  EXPECT_EQ(reader.header().n_episodes, 10u);
  EXPECT_EQ(reader.header().traj_len, 35u);
}

TEST_F(CliTest, GenDataRejectsNegativeNoise) {
  EXPECT_EQ(Cli({"gen-data", "--noise-sigma", "-1", "--n-traj", "1", "--out", P("x.vpds")}), 2);
  EXPECT_FALSE(fs::exists(P("x.vpds")));
}

TEST_F(CliTest, GenTasksCounts) {
  ASSERT_EQ(Cli({"gen-tasks", "--n-per-category", "1", "--seed", "3", "--out", P("t1/tasks.json")}), 0);
  EXPECT_EQ(LoadTaskSet(P("t1/tasks.json")).instances.size(), 4u);
  ASSERT_EQ(Cli({"gen-tasks", "--n-per-category", "1", "--seed", "3", "--out", P("t2/tasks.json")}), 0);
  EXPECT_EQ(Tree(P("t1")), Tree(P("t2")));
  ASSERT_EQ(Cli({"gen-tasks", "--seed", "3", "--out", P("t3/tasks.json")}), 0);
  EXPECT_EQ(LoadTaskSet(P("t3/tasks.json")).instances.size(), 100u);
}

TEST_F(CliTest, FlagPrecedenceMatrix) {
  // key: tasks.n_per_category; sources: default (25), config file, flag
  WriteTextFile(P("c.cfg"), "tasks.n_per_category = 2\n");
  WriteTextFile(P("c.json"), R"({"tasks": {"n_per_category": 3}})");
  struct Case {
    std::vector<std::string> extra;
    size_t expect;
  };
  const std::vector<Case> cases = {
      {{}, 100},
      {{"--config", P("c.cfg")}, 8},
      {{"--config", P("c.json")}, 12},
      {{"--n-per-category", "1"}, 4},
      {{"--config", P("c.cfg"), "--n-per-category", "1"}, 4},
      {{"--n-per-category", "1", "--config", P("c.cfg")}, 4},
  };
  int i = 0;
  for (const auto& c : cases) {
    const std::string out = P("p" + std::to_string(i++) + "/tasks.json");
    std::vector<std::string> args = {"gen-tasks", "--seed", "4", "--out", out};
    args.insert(args.end(), c.extra.begin(), c.extra.end());
    ASSERT_EQ(Cli(args), 0);
    EXPECT_EQ(LoadTaskSet(out).instances.size(), c.expect) << i;
  }
}

TEST_F(CliTest, UnknownConfigKeyFails) {
  WriteTextFile(P("bad.cfg"), "planner.bogus = 1\n");
  EXPECT_EQ(Cli({"gen-tasks", "--config", P("bad.cfg"), "--out", P("t.json")}), 2);
  EXPECT_EQ(Cli({"gen-tasks", "--no-such-flag", "1"}), 2);
  EXPECT_EQ(Cli({"frobnicate"}), 2);
  EXPECT_EQ(Cli({"gen-tasks", "--help"}), 0);
}

class RunTest : public CliTest {
 protected:
  void SetUp() override {
    ASSERT_EQ(Cli({"gen-tasks", "--n-per-category", "1", "--seed", "5", "--out", P("tasks.json")}), 0);
  }
  std::vector<std::string> RunArgs(const std::string& out) {
    return {"run", "--tasks", P("tasks.json"), "--n-samples", "16", "--episode-len", "3",
            "--seed", "11", "--out", out};
  }
};

TEST_F(RunTest, RunIsByteIdenticalApartFromTimings) {
  ASSERT_EQ(Cli(RunArgs(P("r1"))), 0);
  ASSERT_EQ(Cli(RunArgs(P("r2"))), 0);
  const auto a = Tree(P("r1"), "timings.json");
  EXPECT_EQ(a, Tree(P("r2"), "timings.json"));
  EXPECT_TRUE(fs::exists(P("r1/timings.json")));
  EXPECT_EQ(a.count("episodes/push_object_0_000.json"), 1u);
}

TEST_F(RunTest, ManifestIsCompleteAndReproducible) {
  ASSERT_EQ(Cli(RunArgs(P("m1"))), 0);
  const json manifest = json::parse(ReadTextFile(P("m1/manifest.json")));
  EXPECT_EQ(manifest["schema_version"], 1);
  EXPECT_EQ(manifest["engine_version"], kEngineVersion);
  const auto& outputs = manifest["outputs"];
  for (const char* key : {"config_snapshot", "control_report", "control_csv", "timings"}) {
    ASSERT_TRUE(fs::exists(P("m1/" + outputs[key].get<std::string>()))) << key;
  }
  ASSERT_EQ(outputs["episodes"].size(), 4u);
  for (const auto& e : outputs["episodes"]) {
    const json ep = json::parse(ReadTextFile(P("m1/" + e.get<std::string>())));
    EXPECT_EQ(ep["actions"].size(), 3u);
  }
  const json report = json::parse(ReadTextFile(P("m1/control_report.json")));
  EXPECT_EQ(report["episodes"], 4);
  const auto snap = LoadConfigFile(P("m1/config.snapshot"));
  EXPECT_EQ(snap.at("planner.n_samples"), "16");

  // rerun from the snapshot alone
  ASSERT_EQ(Cli({"run", "--config", P("m1/config.snapshot"), "--out", P("m2")}), 0);
  EXPECT_EQ(Tree(P("m1"), "timings.json"), Tree(P("m2"), "timings.json"));
}

TEST_F(RunTest, IdenticalEnsembleReproducesSingleModel) {
  ASSERT_EQ(Cli(RunArgs(P("single"))), 0);
  auto args = RunArgs(P("ens"));
  args.insert(args.end(), {"--ensemble", "4"});
  ASSERT_EQ(Cli(args), 0);
  for (const auto& e : fs::directory_iterator(P("single/episodes"))) {
    const json a = json::parse(ReadTextFile(e.path().string()));
    const json b = json::parse(ReadTextFile(P("ens/episodes/" + e.path().filename().string())));
    EXPECT_EQ(a["actions"], b["actions"]) << e.path();
    for (const auto& d : b["diagnostics"]["mean_delta"]) EXPECT_EQ(d.get<double>(), 0.0);
  }
}

TEST_F(RunTest, UnreachableAddressLeavesNoOutput) {
  auto args = RunArgs(P("unreachable"));
  args.insert(args.end(), {"--model-addr", "127.0.0.1:1", "--model-timeout", "2"});
  EXPECT_EQ(Cli(args), 2);
  EXPECT_FALSE(fs::exists(P("unreachable")));
}

TEST_F(RunTest, RemoteSubprocessModel) {
  auto args = RunArgs(P("remote"));
  args.insert(args.end(), {"--model-cmd", std::string(FORESIGHT_MODEL_SERVER) + " --model persistence"});
  ASSERT_EQ(Cli(args), 0);
  const json manifest = json::parse(ReadTextFile(P("remote/manifest.json")));
  EXPECT_EQ(manifest["model"], "persistence");
}

TEST_F(RunTest, FailingRemoteModelIsBenchmarkFailure) {
  auto args = RunArgs(P("failing"));
  args.insert(args.end(), {"--model-cmd", std::string(FORESIGHT_MODEL_SERVER) + " --model failing"});
  EXPECT_EQ(Cli(args), 1);
  const json report = json::parse(ReadTextFile(P("failing/control_report.json")));
  EXPECT_EQ(report["errored"], 4);
}

TEST_F(RunTest, MissingClassifierForComboCost) {
  auto args = RunArgs(P("combo"));
  args.insert(args.end(), {"--cost", "classifier_combo"});
  EXPECT_EQ(Cli(args), 2);
}

TEST_F(CliTest, TrainClassifierAndStudy) {
  ASSERT_EQ(Cli({"gen-data", "--n-traj", "12", "--seed", "6", "--out", P("d.vpds")}), 0);
  ASSERT_EQ(Cli({"train-classifier", "--dataset", P("d.vpds"), "--category", "push_object_1",
                 "--steps", "100", "--seed", "6", "--out", P("c1.vpcl")}),
            0);
  ASSERT_EQ(Cli({"train-classifier", "--dataset", P("d.vpds"), "--category", "push_object_1",
                 "--steps", "100", "--seed", "6", "--out", P("c2.vpcl")}),
            0);
  EXPECT_EQ(ReadFileBytes(P("c1.vpcl")), ReadFileBytes(P("c2.vpcl")));
  EXPECT_EQ(ClassifierModel::Load(P("c1.vpcl")).info().steps, 100);

  ASSERT_EQ(Cli({"gen-tasks", "--n-per-category", "1", "--seed", "6", "--out", P("tasks.json")}), 0);
  ASSERT_EQ(Cli({"eval-metrics", "--zoo", "oracle", "--heldout", P("d.vpds"), "--n-sequences", "5",
                 "--out", P("m.json")}),
            0);
  const json m = json::parse(ReadTextFile(P("m.json")));
  EXPECT_EQ(m["schema_version"], 1);
  EXPECT_EQ(m["models"].size(), 1u);

  const std::vector<std::string> study = {
      "study", "--zoo", "oracle,blur:2.0", "--heldout", P("d.vpds"), "--tasks", P("tasks.json"),
      "--n-sequences", "5", "--n-samples", "16", "--episode-len", "2", "--seed", "6"};
  auto s1 = study, s2 = study;
  s1.insert(s1.end(), {"--out", P("s1")});
  s2.insert(s2.end(), {"--out", P("s2")});
  ASSERT_EQ(Cli(s1), 0);
  ASSERT_EQ(Cli(s2), 0);
  EXPECT_EQ(Tree(P("s1"), "timings.json"), Tree(P("s2"), "timings.json"));
  const json report = json::parse(ReadTextFile(P("s1/study_report.json")));
  EXPECT_EQ(report["rows"].size(), 2u);

  auto one = study;
  one[2] = "oracle";
  one.insert(one.end(), {"--out", P("s3")});
  ASSERT_EQ(Cli(one), 0);
  EXPECT_EQ(json::parse(ReadTextFile(P("s3/study_report.json")))["rows"].size(), 1u);

  auto bad = study;
  bad[2] = "oracle,blur";
  bad.insert(bad.end(), {"--out", P("s4")});
  EXPECT_EQ(Cli(bad), 2);
}

TEST(BinaryTest, ExitStatuses) {
  const std::string cli = FORESIGHT_CLI;
  EXPECT_EQ(Shell(cli + " --help"), 0);
  EXPECT_EQ(Shell(cli + " gen-data --noise-sigma -1 --n-traj 1 --out /tmp/never.vpds"), 2);
  EXPECT_EQ(Shell(cli), 2);
  TempDir dir("bin");
  EXPECT_EQ(Shell(cli + " gen-tasks --n-per-category 1 --out " + (dir / "t.json")), 0);
  EXPECT_EQ(Shell("VP2_LOG=error " + cli + " run --tasks " + (dir / "t.json") +
                  " --model-addr 127.0.0.1:1 --model-timeout 1 --out " + (dir / "r")),
            2);
}

}  // namespace
}  // namespace foresight

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

#include "foresight/bench/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "fmt/format.h"
#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"
#include "foresight/common/random.h"
#include "json.hpp"

namespace foresight {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseInteger(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid integer", key, value));
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, value));
  }
  return v;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, value));
}

std::string Num(double v) { return fmt::format("{}", v); }
std::string Num(float v) { return fmt::format("{}", v); }

struct Field {
  std::function<void(BenchConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const BenchConfig&)> get;
  bool in_snapshot = true;
};

template <typename T, typename Member>
Field IntField(Member member) {
  return {[member](BenchConfig& c, const std::string& k, const std::string& v) {
            std::invoke(member, c) = ParseInteger<T>(k, v);
          },
          [member](const BenchConfig& c) {
            return std::to_string(std::invoke(member, c));
          }};
}

template <typename Member>
Field RealField(Member member) {
  return {[member](BenchConfig& c, const std::string& k, const std::string& v) {
            using T = std::remove_reference_t<decltype(std::invoke(member, c))>;
            std::invoke(member, c) = static_cast<T>(ParseReal(k, v));
          },
          [member](const BenchConfig& c) { return Num(std::invoke(member, c)); }};
}

template <typename Member>
Field StringField(Member member, bool in_snapshot = true) {
  return {[member](BenchConfig& c, const std::string&, const std::string& v) {
            std::invoke(member, c) = v;
          },
          [member](const BenchConfig& c) { return std::invoke(member, c); },
          in_snapshot};
}

const std::map<std::string, Field>& Fields() {
  static const auto* fields = new std::map<std::string, Field>{
      {"seed", IntField<uint64_t>([](auto& c) -> auto& { return c.master_seed; })},
      {"world.arena_side", RealField([](auto& c) -> auto& { return c.world.arena_side; })},
      {"world.pusher_radius", RealField([](auto& c) -> auto& { return c.world.pusher_radius; })},
      {"world.max_action_step", RealField([](auto& c) -> auto& { return c.world.max_action_step; })},
      {"world.render_resolution", IntField<int>([](auto& c) -> auto& { return c.world.render_resolution; })},
      {"planner.n_samples", IntField<int>([](auto& c) -> auto& { return c.planner.n_samples; })},
      {"planner.gamma", RealField([](auto& c) -> auto& { return c.planner.temperature; })},
      {"planner.beta", RealField([](auto& c) -> auto& { return c.planner.noise_correlation; })},
      {"planner.sample_stdev",
       {[](BenchConfig& c, const std::string& k, const std::string& v) {
          std::vector<double> out;
          std::stringstream ss(v);
          std::string item;
          while (std::getline(ss, item, ',')) out.push_back(ParseReal(k, Trim(item)));
          if (out.size() == 1) out.push_back(out.front());
          if (out.size() != 2) throw ConfigError(k + ": expected 1 or 2 values");
          c.planner.sample_stdev = out;
        },
        [](const BenchConfig& c) {
          std::string s;
          for (double v : c.planner.sample_stdev) s += (s.empty() ? "" : ",") + Num(v);
          return s;
        }}},
      {"planner.horizon", IntField<int>([](auto& c) -> auto& { return c.planner.plan_horizon; })},
      {"planner.context_len", IntField<int>([](auto& c) -> auto& { return c.planner.context_len; })},
      {"planner.algorithm",
       {[](BenchConfig& c, const std::string&, const std::string& v) {
          c.planner.algorithm = ParsePlannerAlgorithm(v);
        },
        [](const BenchConfig& c) {
          return std::string(PlannerAlgorithmName(c.planner.algorithm));
        }}},
      {"planner.cem_elite_frac", RealField([](auto& c) -> auto& { return c.planner.cem_elite_frac; })},
      {"planner.cem_iterations", IntField<int>([](auto& c) -> auto& { return c.planner.cem_iterations; })},
      {"planner.score_scale",
       {[](BenchConfig& c, const std::string& k, const std::string& v) {
          if (v == "auto") {
            c.planner.score_scale.reset();
          } else {
            c.planner.score_scale = ParseReal(k, v);
          }
        },
        [](const BenchConfig& c) {
          return c.planner.score_scale ? Num(*c.planner.score_scale) : std::string("auto");
        }}},
      {"planner.eval_chunk", IntField<int>([](auto& c) -> auto& { return c.planner.eval_chunk; })},
      {"mpc.episode_len", IntField<int>([](auto& c) -> auto& { return c.mpc.episode_len; })},
      {"mpc.record_candidates",
       {[](BenchConfig& c, const std::string& k, const std::string& v) {
          c.mpc.record_candidates = ParseBool(k, v);
        },
        [](const BenchConfig& c) {
          return std::string(c.mpc.record_candidates ? "true" : "false");
        }}},
      {"cost.kind",
       {[](BenchConfig& c, const std::string&, const std::string& v) {
          c.cost.kind = ParseCostKind(v);
        },
        [](const BenchConfig& c) { return std::string(CostKindName(c.cost.kind)); }}},
      {"cost.pixel_weight",
       {[](BenchConfig& c, const std::string& k, const std::string& v) {
          c.explicit_pixel_weight = ParseReal(k, v);
        },
        [](const BenchConfig& c) { return Num(c.cost.pixel_weight); }}},
      {"cost.classifier_weight", RealField([](auto& c) -> auto& { return c.cost.classifier_weight; })},
      {"cost.lambda", RealField([](auto& c) -> auto& { return c.cost.penalty_lambda; })},
      {"cost.classifier", StringField([](auto& c) -> auto& { return c.classifier_path; })},
      {"model.kind", StringField([](auto& c) -> auto& { return c.model.kind; })},
      {"model.cmd", StringField([](auto& c) -> auto& { return c.model.cmd; })},
      {"model.addr", StringField([](auto& c) -> auto& { return c.model.addr; })},
      {"model.ensemble", IntField<int>([](auto& c) -> auto& { return c.model.ensemble; })},
      {"model.timeout_s", RealField([](auto& c) -> auto& { return c.model.timeout_s; })},
      {"data.n_traj", IntField<int>([](auto& c) -> auto& { return c.data.n_traj; })},
      {"data.noise_sigma", RealField([](auto& c) -> auto& { return c.data.noise_sigma; })},
      {"data.traj_len", IntField<int>([](auto& c) -> auto& { return c.data.traj_len; })},
      {"data.path", StringField([](auto& c) -> auto& { return c.dataset_path; })},
      {"tasks.n_per_category", IntField<int>([](auto& c) -> auto& { return c.tasks.n_per_category; })},
      {"tasks.path", StringField([](auto& c) -> auto& { return c.tasks_path; })},
      {"classifier.steps", IntField<int>([](auto& c) -> auto& { return c.classifier.steps; })},
      {"classifier.learning_rate", RealField([](auto& c) -> auto& { return c.classifier.learning_rate; })},
      {"classifier.batch_size", IntField<int>([](auto& c) -> auto& { return c.classifier.batch_size; })},
      {"classifier.loss_every", IntField<int>([](auto& c) -> auto& { return c.classifier.loss_every; })},
      {"classifier.category", StringField([](auto& c) -> auto& { return c.classifier_category; })},
      {"metrics.n_sequences", IntField<int>([](auto& c) -> auto& { return c.metrics.n_sequences; })},
      {"metrics.heldout", StringField([](auto& c) -> auto& { return c.heldout_path; })},
      {"study.zoo", StringField([](auto& c) -> auto& { return c.zoo; })},
      {"output", StringField([](auto& c) -> auto& { return c.output_path; }, false)},
  };
  return *fields;
}

void FlattenInto(const nlohmann::json& j, const std::string& prefix,
                 SettingMap& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      FlattenInto(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  if (prefix.empty()) throw ConfigError("JSON config must be an object");
  if (j.is_array()) {
    std::string joined;
    for (const auto& e : j) {
      if (e.is_structured()) throw ConfigError(prefix + ": nested arrays are not supported");
      FlattenInto(e, prefix, out);
      joined += (joined.empty() ? "" : ",") + out[prefix];
    }
    out[prefix] = joined;
  } else if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else if (j.is_boolean()) {
    out[prefix] = j.get<bool>() ? "true" : "false";
  } else if (j.is_number_integer()) {
    out[prefix] = j.dump();
  } else if (j.is_number()) {
    out[prefix] = fmt::format("{}", j.get<double>());
  } else {
    throw ConfigError(prefix + ": null values are not allowed");
  }
}

}  // namespace

SettingMap ParseFlatConfig(const std::string& text) {
  SettingMap out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", lineno));
    out[key] = Trim(line.substr(eq + 1));
  }
  return out;
}

SettingMap FlattenJsonConfig(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  SettingMap out;
  FlattenInto(j, "", out);
  return out;
}

SettingMap LoadConfigFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return FlattenJsonConfig(text);
  return ParseFlatConfig(text);
}

std::string FormatFlatConfig(const SettingMap& settings) {
  std::string out;
  for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
  return out;
}

void BenchConfig::Apply(const SettingMap& settings) {
  const auto& fields = Fields();
  for (const auto& [key, value] : settings) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.set(*this, key, value);
  }
  cost.pixel_weight = explicit_pixel_weight.value_or(
      cost.kind == CostKind::kClassifierCombo ? 0.5 : 1.0);
}

SettingMap BenchConfig::Snapshot() const {
  SettingMap out;
  for (const auto& [key, field] : Fields()) {
    if (field.in_snapshot) out[key] = field.get(*this);
  }
  return out;
}

void BenchConfig::Validate() const {
  world.Validate();
  planner.Validate();
  mpc.Validate();
  if (!(data.noise_sigma >= 0.0f)) throw ConfigError("noise_sigma must be >= 0");
  if (data.traj_len < 2) throw ConfigError("traj_len must be >= 2");
  if (data.n_traj < 0) throw ConfigError("n_traj must be >= 0");
  if (tasks.n_per_category < 1) throw ConfigError("n_per_category must be >= 1");
  if (classifier.steps < 0) throw ConfigError("classifier steps must be >= 0");
  if (!(classifier.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (classifier.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (classifier.loss_every < 1) throw ConfigError("loss_every must be >= 1");
  if (metrics.n_sequences < 1) throw ConfigError("n_sequences must be >= 1");
  if (model.ensemble < 1) throw ConfigError("ensemble size must be >= 1");
  if (!model.cmd.empty() && !model.addr.empty()) {
    throw ConfigError("--model-cmd and --model-addr are mutually exclusive");
  }
  if (!(model.timeout_s > 0.0)) throw ConfigError("model timeout must be > 0");
  if (!(cost.pixel_weight >= 0.0) || !(cost.classifier_weight >= 0.0)) {
    throw ConfigError("cost weights must be >= 0");
  }
  if (!(cost.penalty_lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
}

uint64_t BenchConfig::SeedFor(const std::string& role) const {
  return DeriveSeed(master_seed, role);
}

}  // namespace foresight

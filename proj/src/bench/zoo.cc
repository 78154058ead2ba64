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

#include "foresight/bench/zoo.h"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fmt/format.h"
#include "foresight/common/errors.h"
#include "foresight/models/ensemble.h"
#include "foresight/models/remote.h"
#include "foresight/models/transport.h"

namespace foresight {

ZooEntry ParseZooEntry(const std::string& text) {
  ZooEntry entry;
  entry.text = text;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "oracle") {
    if (colon != std::string::npos) throw ConfigError("oracle takes no strength: '" + text + "'");
    return entry;
  }
  DegradationKind d;
  try {
    d = ParseDegradationKind(kind);
  } catch (const ConfigError&) {
    throw ConfigError("unknown model '" + text + "'");
  }
  entry.degradation = d;
  const bool needs_strength =
      d == DegradationKind::kBlur || d == DegradationKind::kPixelNoise;
  if (!needs_strength) {
    if (colon != std::string::npos) throw ConfigError(kind + " takes no strength: '" + text + "'");
    return entry;
  }
  if (colon == std::string::npos) throw ConfigError(kind + " needs a strength, e.g. '" + kind + ":2.0'");
  const std::string value = text.substr(colon + 1);
  char* end = nullptr;
  const double s = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(s) || s < 0) {
    throw ConfigError("bad strength in '" + text + "'");
  }
  entry.strength = s;
  return entry;
}

std::vector<ZooEntry> ParseZoo(const std::string& text) {
  std::vector<ZooEntry> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ConfigError("empty entry in zoo '" + text + "'");
    out.push_back(ParseZooEntry(item));
  }
  if (out.empty() || text.back() == ',') throw ConfigError("malformed zoo '" + text + "'");
  return out;
}

ModelHandle BuildZooModel(const ZooEntry& entry,
                          std::shared_ptr<OracleModel> oracle, uint64_t seed) {
  if (!entry.degradation) return oracle;
  return MakeDegraded(std::move(oracle), *entry.degradation, entry.strength, seed);
}

namespace {

ModelHandle ConnectRemote(const BenchConfig& config) {
  protocol::Signature sig;
  sig.context_frames = config.planner.context_len;
  sig.horizon = config.planner.plan_horizon;
  sig.height = sig.width = config.world.render_resolution;
  sig.channels = Frame::kChannels;
  sig.action_dim = 2;
  const Milliseconds timeout(static_cast<int64_t>(config.model.timeout_s * 1000));
  std::unique_ptr<Transport> transport;
  if (!config.model.cmd.empty()) {
    transport = std::make_unique<SubprocessTransport>(config.model.cmd);
  } else {
    transport = ConnectTcp(config.model.addr, timeout);
  }
  return RemoteHandshake(std::move(transport), sig, timeout);
}

}  // namespace

ModelHandle BuildConfiguredModel(const BenchConfig& config) {
  const int n = config.model.ensemble;
  std::vector<ModelHandle> members;
  if (!config.model.cmd.empty() || !config.model.addr.empty()) {
    for (int i = 0; i < n; ++i) members.push_back(ConnectRemote(config));
  } else {
    const ZooEntry entry = ParseZooEntry(config.model.kind);
    auto oracle = std::make_shared<OracleModel>(config.world);
    for (int i = 0; i < n; ++i) {
      const uint64_t seed = config.SeedFor(fmt::format("model/{}/{}", entry.text, i));
      members.push_back(entry.degradation ? BuildZooModel(entry, oracle, seed) : oracle);
    }
  }
  if (n == 1) return members.front();
  const std::string name = fmt::format("ensemble{}({})", n, members.front()->name());
  return std::make_shared<EnsembleModel>(std::move(members), name);
}

}  // namespace foresight

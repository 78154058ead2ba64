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

#ifndef FORESIGHT_BENCH_ZOO_H_
#define FORESIGHT_BENCH_ZOO_H_

#include <optional>
#include <string>
#include <vector>

#include "foresight/bench/config.h"
#include "foresight/models/oracle.h"
#include "foresight/models/prediction.h"

namespace foresight {

// One built-in model: the oracle or a degraded oracle.
struct ZooEntry {
  std::optional<DegradationKind> degradation;  // empty for the oracle
  double strength = 0.0;
  std::string text;  // as written

  bool operator==(const ZooEntry&) const = default;
};

// "oracle" | "blur:<px>" | "noise:<stdev>" | "pixel_noise:<stdev>" |
// "action_blind" | "lagged". blur and noise need a strength; the others take
// none. Throws ConfigError on anything else.
ZooEntry ParseZooEntry(const std::string& text);
// Comma-separated list of entries; empty items are rejected.
std::vector<ZooEntry> ParseZoo(const std::string& text);

ModelHandle BuildZooModel(const ZooEntry& entry,
                          std::shared_ptr<OracleModel> oracle, uint64_t seed);

// The model described by config.model: a built-in zoo model, or a remote
// model reached through a subprocess (model.cmd) or TCP (model.addr). With
// model.ensemble = N > 1 the result is an ensemble of N members. Built-in
// oracles share one handle; degraded members get distinct seeds; remote
// members get one connection each. Transport failures raise ConnectionError.
ModelHandle BuildConfiguredModel(const BenchConfig& config);

}  // namespace foresight

#endif  // FORESIGHT_BENCH_ZOO_H_

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

#ifndef FORESIGHT_WORLD_DATASET_H_
#define FORESIGHT_WORLD_DATASET_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "foresight/world/tasks.h"
#include "foresight/world/world.h"

namespace foresight {

// One recorded trajectory. success_labels[t][k] is true when object k has
// been displaced by more than kDefaultSuccessRadius from its position at t=0,
// i.e. "push_object_k" has visibly happened.
struct Episode {
  std::vector<Frame> frames;
  std::vector<Action> actions;
  std::vector<SimState> states;
  std::vector<std::vector<bool>> success_labels;
};

// Per-step record for inspecting the injected exploration noise.
struct NoisyStepRecord {
  Action deterministic;  // scripted policy output
  Action commanded;      // deterministic + noise, before clipping
  Action executed;       // clipped command
};
using NoiseObserver = std::function<void(const NoisyStepRecord&)>;

// Samples a random scene, target and direction, then rolls the scripted
// policy with Gaussian action noise for traj_len frames.
Episode CollectEpisode(const WorldConfig& config, float noise_sigma,
                       int traj_len, Rng& rng,
                       const NoiseObserver& observer = {});

std::vector<bool> DisplacementLabels(const SimState& initial,
                                     const SimState& state);

struct DatasetHeader {
  static constexpr char kMagic[4] = {'V', 'P', 'D', 'S'};
  static constexpr uint8_t kVersion = 1;
  static constexpr size_t kBytes = 4 + 1 + 6 * 4;

  uint32_t n_episodes = 0;
  uint32_t traj_len = 0;
  uint32_t height = 0;
  uint32_t width = 0;
  uint32_t action_dim = 2;
  uint32_t n_categories = 0;

  size_t EpisodeBytes() const;
};

// On-disk episode. Object positions are [traj_len x n_categories x 2]; this
// world has exactly one category per object.
struct EpisodeRecord {
  std::vector<uint8_t> frames;
  std::vector<float> actions;
  std::vector<float> object_positions;
  std::vector<float> pusher_positions;
  std::vector<uint8_t> success_labels;

  Frame FrameAt(const DatasetHeader& header, int t) const;
};

EpisodeRecord ToRecord(const Episode& episode);

class DatasetWriter {
 public:
  DatasetWriter(const std::string& path, const DatasetHeader& header);
  void Append(const EpisodeRecord& record);
  // Throws if fewer episodes were appended than the header promised.
  void Close();

 private:
  std::ofstream out_;
  DatasetHeader header_;
  uint32_t written_ = 0;
};

// Random-access reader; episodes are loaded on demand.
class DatasetReader {
 public:
  explicit DatasetReader(const std::string& path);
  const DatasetHeader& header() const { return header_; }
  EpisodeRecord Read(uint32_t index);

 private:
  std::ifstream in_;
  DatasetHeader header_;
};

struct DatasetOptions {
  int n_traj = 5000;
  float noise_sigma = 0.05f;
  int traj_len = 35;
};

void CollectDataset(const WorldConfig& config, const DatasetOptions& options,
                    uint64_t seed, const std::string& path);

// Rebuilds the simulator state behind frame t of a recorded episode. Object
// colors are not stored in the file, so they are read back from the frame at
// each object's center and matched against the palette.
SimState RecoverState(const DatasetHeader& header, const EpisodeRecord& record,
                      int t, const WorldConfig& config);

}  // namespace foresight

#endif  // FORESIGHT_WORLD_DATASET_H_

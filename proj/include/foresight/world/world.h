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

#ifndef FORESIGHT_WORLD_WORLD_H_
#define FORESIGHT_WORLD_WORLD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "foresight/common/frame.h"

namespace foresight {

class Rng;

struct Vec2 {
  float x = 0.0f;
  float y = 0.0f;
  bool operator==(const Vec2&) const = default;
};

enum class ShapeKind { kDisc, kSquare };

// size is the radius of a disc or the half-extent of a square. Contact treats
// both as a disc of that radius.
struct ObjectSpec {
  ShapeKind shape = ShapeKind::kDisc;
  float size = 0.05f;
};

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr int kPaletteSize = 13;

std::vector<ObjectSpec> DefaultObjectSpecs();
std::vector<Rgb> DefaultPalette();

struct WorldConfig {
  float arena_side = 1.0f;
  float pusher_radius = 0.06f;
  float max_action_step = 0.08f;
  std::vector<ObjectSpec> object_specs = DefaultObjectSpecs();
  int render_resolution = 64;
  std::vector<Rgb> color_palette = DefaultPalette();
  Rgb background_color{235, 235, 235};

  int num_objects() const { return static_cast<int>(object_specs.size()); }
  float object_radius(int spec_index) const {
    return object_specs[spec_index].size;
  }
  // Throws ConfigError when an invariant is violated.
  void Validate() const;
};

struct ObjectState {
  int spec_index = 0;
  int color_index = 0;
  Vec2 pos;
  bool operator==(const ObjectState&) const = default;
};

// Positions are stored in single precision so that recorded datasets hold
// the exact simulator state.
struct SimState {
  Vec2 pusher_pos;
  std::vector<ObjectState> objects;
  int step_count = 0;
  bool operator==(const SimState&) const = default;
};

struct Action {
  Vec2 delta;
};

// Throws InvalidInputError if the state does not match the config or an
// entity lies outside its arena margin.
void ValidateState(const SimState& state, const WorldConfig& config);

// Clips each component to [-max_action_step, max_action_step].
Action ClipAction(const Action& action, const WorldConfig& config);

// Advances the world by one control step. Pure and deterministic.
SimState Step(const SimState& state, const Action& action,
              const WorldConfig& config);

// Rasterizes into `out` (render_resolution^2 * 3 floats). A pixel belongs to
// a shape iff its center lies inside it; background first, then objects in
// list order, pusher last.
void RenderInto(const SimState& state, const WorldConfig& config,
                std::span<float> out);
Frame Render(const SimState& state, const WorldConfig& config);

// Random non-overlapping placement with distinct palette colors. Objects and
// pusher keep a clearance of kPlacementClearance beyond touching.
inline constexpr float kPlacementClearance = 0.02f;
SimState SampleInitialState(const WorldConfig& config, Rng& rng);

// "push_object_k" <-> k.
std::string CategoryName(int object_index);
int ParseCategory(const std::string& category, const WorldConfig& config);
std::vector<std::string> AllCategories(const WorldConfig& config);

}  // namespace foresight

#endif  // FORESIGHT_WORLD_WORLD_H_

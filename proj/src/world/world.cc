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

#include "foresight/world/world.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {
namespace {

bool Finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

bool InsideMargin(Vec2 p, float margin, float side) {
  return p.x >= margin && p.x <= side - margin && p.y >= margin &&
         p.y <= side - margin;
}

double ClampD(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void FillShape(std::span<float> out, int res, float side, Vec2 center,
               float size, ShapeKind shape, const float color[3]) {
  const double scale = static_cast<double>(res) / side;
  const double cx = center.x * scale, cy = center.y * scale;
  const double r = size * scale;
  // pixel (row, col) has its center at ((col + 0.5), (row + 0.5)) in pixels
  const int col0 = std::max(0, static_cast<int>(std::floor(cx - r - 0.5)));
  const int col1 = std::min(res - 1, static_cast<int>(std::ceil(cx + r - 0.5)));
  const int row0 = std::max(0, static_cast<int>(std::floor(cy - r - 0.5)));
  const int row1 = std::min(res - 1, static_cast<int>(std::ceil(cy + r - 0.5)));
  const double r2 = r * r;
  for (int row = row0; row <= row1; ++row) {
    const double dy = row + 0.5 - cy;
    for (int col = col0; col <= col1; ++col) {
      const double dx = col + 0.5 - cx;
      const bool inside = shape == ShapeKind::kDisc
                              ? dx * dx + dy * dy <= r2
                              : std::abs(dx) <= r && std::abs(dy) <= r;
      if (!inside) continue;
      float* px = &out[(static_cast<size_t>(row) * res + col) * 3];
      px[0] = color[0];
      px[1] = color[1];
      px[2] = color[2];
    }
  }
}

void ToFloat(Rgb c, float out[3]) {
  out[0] = c.r / 255.0f;
  out[1] = c.g / 255.0f;
  out[2] = c.b / 255.0f;
}

}  // namespace

std::vector<ObjectSpec> DefaultObjectSpecs() {
  return {{ShapeKind::kSquare, 0.05f},
          {ShapeKind::kSquare, 0.035f},
          {ShapeKind::kDisc, 0.05f},
          {ShapeKind::kDisc, 0.03f}};
}

std::vector<Rgb> DefaultPalette() {
  return {{230, 25, 75},   {60, 180, 75},   {255, 200, 25},  {0, 130, 200},
          {245, 130, 48},  {145, 30, 180},  {70, 200, 220},  {240, 50, 230},
          {150, 200, 40},  {250, 160, 190}, {0, 128, 128},   {170, 110, 40},
          {0, 0, 128}};
}

void WorldConfig::Validate() const {
  if (!(arena_side > 0)) throw ConfigError("arena_side must be positive");
  if (!(pusher_radius > 0)) throw ConfigError("pusher_radius must be positive");
  if (!(max_action_step > 0)) {
    throw ConfigError("max_action_step must be positive");
  }
  if (render_resolution < 16) {
    throw ConfigError("render_resolution must be at least 16");
  }
  if (static_cast<int>(color_palette.size()) != kPaletteSize) {
    throw ConfigError("color_palette must have exactly 13 entries");
  }
  if (object_specs.empty()) throw ConfigError("object_specs is empty");
  if (static_cast<int>(object_specs.size()) > kPaletteSize) {
    throw ConfigError("more objects than palette colors");
  }
  for (const auto& spec : object_specs) {
    if (!(spec.size > 0) || !(spec.size < arena_side / 4)) {
      throw ConfigError("object size must lie in (0, arena_side / 4)");
    }
  }
}

void ValidateState(const SimState& state, const WorldConfig& config) {
  if (static_cast<int>(state.objects.size()) != config.num_objects()) {
    throw InvalidInputError("state object count does not match config");
  }
  if (!Finite(state.pusher_pos) ||
      !InsideMargin(state.pusher_pos, config.pusher_radius, config.arena_side)) {
    throw InvalidInputError("pusher outside arena");
  }
  for (size_t i = 0; i < state.objects.size(); ++i) {
    const auto& obj = state.objects[i];
    if (obj.spec_index != static_cast<int>(i)) {
      throw InvalidInputError("object spec_index out of order");
    }
    if (obj.color_index < 0 ||
        obj.color_index >= static_cast<int>(config.color_palette.size())) {
      throw InvalidInputError("object color_index out of range");
    }
    if (!Finite(obj.pos) || !InsideMargin(obj.pos, config.object_radius(i),
                                          config.arena_side)) {
      throw InvalidInputError("object outside arena");
    }
  }
}

Action ClipAction(const Action& action, const WorldConfig& config) {
  const float m = config.max_action_step;
  return {{std::clamp(action.delta.x, -m, m), std::clamp(action.delta.y, -m, m)}};
}

SimState Step(const SimState& state, const Action& action,
              const WorldConfig& config) {
  if (!Finite(action.delta)) {
    throw InvalidInputError("action has non-finite components");
  }
  const Action a = ClipAction(action, config);
  const double side = config.arena_side;
  const double pr = config.pusher_radius;

  SimState next = state;
  next.step_count = state.step_count + 1;
  const double px = ClampD(double(state.pusher_pos.x) + a.delta.x, pr, side - pr);
  const double py = ClampD(double(state.pusher_pos.y) + a.delta.y, pr, side - pr);
  next.pusher_pos = {static_cast<float>(px), static_cast<float>(py)};

  for (auto& obj : next.objects) {
    const double r = config.object_radius(obj.spec_index);
    const double contact = pr + r;
    double ox = obj.pos.x, oy = obj.pos.y;
    const double dx = ox - px, dy = oy - py;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist < contact) {
      double nx, ny;
      if (dist > 0) {
        nx = dx / dist;
        ny = dy / dist;
      } else {
        // coincident centers: push along the motion, or +x when static
        const double n = std::hypot(double(a.delta.x), double(a.delta.y));
        nx = n > 0 ? a.delta.x / n : 1.0;
        ny = n > 0 ? a.delta.y / n : 0.0;
      }
      ox = px + nx * contact;
      oy = py + ny * contact;
    }
    ox = ClampD(ox, r, side - r);
    oy = ClampD(oy, r, side - r);
    obj.pos = {static_cast<float>(ox), static_cast<float>(oy)};
  }
  return next;
}

void RenderInto(const SimState& state, const WorldConfig& config,
                std::span<float> out) {
  const int res = config.render_resolution;
  const size_t n = static_cast<size_t>(res) * res * 3;
  if (out.size() != n) throw InvalidInputError("render buffer has wrong size");

  float bg[3];
  ToFloat(config.background_color, bg);
  for (size_t i = 0; i < n; i += 3) {
    out[i] = bg[0];
    out[i + 1] = bg[1];
    out[i + 2] = bg[2];
  }
  for (const auto& obj : state.objects) {
    float color[3];
    ToFloat(config.color_palette[obj.color_index], color);
    const auto& spec = config.object_specs[obj.spec_index];
    FillShape(out, res, config.arena_side, obj.pos, spec.size, spec.shape,
              color);
  }
  const float black[3] = {0.0f, 0.0f, 0.0f};
  FillShape(out, res, config.arena_side, state.pusher_pos,
            config.pusher_radius, ShapeKind::kDisc, black);
}

Frame Render(const SimState& state, const WorldConfig& config) {
  Frame frame(config.render_resolution, config.render_resolution);
  RenderInto(state, config, frame.data());
  return frame;
}

SimState SampleInitialState(const WorldConfig& config, Rng& rng) {
  constexpr int kMaxAttempts = 10000;
  const float side = config.arena_side;
  SimState state;

  // distinct colors: partial Fisher-Yates over the palette
  std::vector<int> colors(config.color_palette.size());
  for (size_t i = 0; i < colors.size(); ++i) colors[i] = static_cast<int>(i);
  for (int i = 0; i < config.num_objects(); ++i) {
    const auto j = i + static_cast<int>(rng.UniformInt(colors.size() - i));
    std::swap(colors[i], colors[j]);
  }

  auto clear_of_objects = [&](Vec2 p, float radius) {
    for (const auto& other : state.objects) {
      const double d = std::hypot(double(p.x) - other.pos.x,
                                  double(p.y) - other.pos.y);
      if (d <= radius + config.object_radius(other.spec_index) +
                   kPlacementClearance) {
        return false;
      }
    }
    return true;
  };
  auto sample_pos = [&](float margin) {
    return Vec2{static_cast<float>(rng.Uniform(margin, side - margin)),
                static_cast<float>(rng.Uniform(margin, side - margin))};
  };

  for (int i = 0; i < config.num_objects(); ++i) {
    const float r = config.object_radius(i);
    int attempts = 0;
    Vec2 p;
    do {
      if (++attempts > kMaxAttempts) {
        throw GenerationError("could not place objects without overlap");
      }
      p = sample_pos(r);
    } while (!clear_of_objects(p, r));
    state.objects.push_back({i, colors[i], p});
  }
  int attempts = 0;
  do {
    if (++attempts > kMaxAttempts) {
      throw GenerationError("could not place pusher without overlap");
    }
    state.pusher_pos = sample_pos(config.pusher_radius);
  } while (!clear_of_objects(state.pusher_pos, config.pusher_radius));
  return state;
}

std::string CategoryName(int object_index) {
  return "push_object_" + std::to_string(object_index);
}

int ParseCategory(const std::string& category, const WorldConfig& config) {
  const std::string prefix = "push_object_";
  if (category.rfind(prefix, 0) == 0 && category.size() == prefix.size() + 1) {
    const int k = category.back() - '0';
    if (k >= 0 && k < config.num_objects() && k <= 9) return k;
  }
  throw ConfigError("unrecognized task category '" + category + "'");
}

std::vector<std::string> AllCategories(const WorldConfig& config) {
  std::vector<std::string> out;
  for (int k = 0; k < config.num_objects(); ++k) out.push_back(CategoryName(k));
  return out;
}

}  // namespace foresight

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

#include "foresight/world/task_io.h"

#include <cstring>
#include <filesystem>

#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"

namespace foresight {

using nlohmann::json;
namespace fs = std::filesystem;

json ToJson(const WorldConfig& c) {
  json specs = json::array();
  for (const auto& s : c.object_specs) {
    specs.push_back({{"shape", s.shape == ShapeKind::kDisc ? "disc" : "square"},
                     {"size", s.size}});
  }
  json palette = json::array();
  for (const auto& rgb : c.color_palette) palette.push_back({rgb.r, rgb.g, rgb.b});
  return {{"arena_side", c.arena_side},
          {"pusher_radius", c.pusher_radius},
          {"max_action_step", c.max_action_step},
          {"object_specs", specs},
          {"render_resolution", c.render_resolution},
          {"color_palette", palette},
          {"background_color",
           {c.background_color.r, c.background_color.g, c.background_color.b}}};
}

WorldConfig WorldConfigFromJson(const json& j) {
  WorldConfig c;
  try {
    c.arena_side = j.value("arena_side", c.arena_side);
    c.pusher_radius = j.value("pusher_radius", c.pusher_radius);
    c.max_action_step = j.value("max_action_step", c.max_action_step);
    c.render_resolution = j.value("render_resolution", c.render_resolution);
    if (j.contains("object_specs")) {
      c.object_specs.clear();
      for (const auto& s : j.at("object_specs")) {
        const std::string shape = s.at("shape");
        if (shape != "disc" && shape != "square") {
          throw ConfigError("unknown object shape '" + shape + "'");
        }
        c.object_specs.push_back(
            {shape == "disc" ? ShapeKind::kDisc : ShapeKind::kSquare,
             s.at("size").get<float>()});
      }
    }
    auto rgb = [](const json& a) {
      return Rgb{a.at(0).get<uint8_t>(), a.at(1).get<uint8_t>(),
                 a.at(2).get<uint8_t>()};
    };
    if (j.contains("color_palette")) {
      c.color_palette.clear();
      for (const auto& a : j.at("color_palette")) c.color_palette.push_back(rgb(a));
    }
    if (j.contains("background_color")) c.background_color = rgb(j.at("background_color"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad world config: ") + e.what());
  }
  c.Validate();
  return c;
}

json ToJson(const SimState& s) {
  json objects = json::array();
  for (const auto& o : s.objects) {
    objects.push_back({{"spec_index", o.spec_index},
                       {"color_index", o.color_index},
                       {"pos", {o.pos.x, o.pos.y}}});
  }
  return {{"pusher_pos", {s.pusher_pos.x, s.pusher_pos.y}},
          {"objects", objects},
          {"step_count", s.step_count}};
}

SimState SimStateFromJson(const json& j) {
  SimState s;
  try {
    s.pusher_pos = {j.at("pusher_pos").at(0).get<float>(),
                    j.at("pusher_pos").at(1).get<float>()};
    for (const auto& o : j.at("objects")) {
      s.objects.push_back({o.at("spec_index").get<int>(),
                           o.at("color_index").get<int>(),
                           {o.at("pos").at(0).get<float>(),
                            o.at("pos").at(1).get<float>()}});
    }
    s.step_count = j.value("step_count", 0);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad state: ") + e.what());
  }
  return s;
}

void WriteImageFile(const std::string& path, const Frame& frame) {
  ByteWriter w;
  w.PutString("VPIM");
  w.PutU8(1);
  w.PutU32(frame.height);
  w.PutU32(frame.width);
  w.PutU32(Frame::kChannels);
  w.PutBytes(FrameToBytes(frame));
  WriteFileBytes(path, w.bytes());
}

Frame ReadImageFile(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  ByteReader<IoError> r(bytes);
  if (r.GetString(4) != "VPIM") throw IoError("bad image magic: " + path);
  if (r.GetU8() != 1) throw IoError("unsupported image version: " + path);
  const uint32_t h = r.GetU32(), w = r.GetU32(), c = r.GetU32();
  if (c != Frame::kChannels) throw IoError("image must have 3 channels: " + path);
  auto pixels = r.GetBytes(size_t(h) * w * c);
  if (r.remaining() != 0) throw IoError("trailing bytes in image: " + path);
  return FrameFromBytes(h, w, pixels);
}

void SaveTaskSet(const std::string& path, const TaskSet& tasks) {
  const fs::path dir = fs::path(path).parent_path();
  json instances = json::array();
  for (const auto& t : tasks.instances) {
    const std::string image = t.id + ".vpim";
    WriteImageFile((dir / image).string(), t.goal_frame);
    instances.push_back({{"id", t.id},
                         {"category", t.category},
                         {"init_state", ToJson(t.init_state)},
                         {"goal_state", ToJson(t.goal_state)},
                         {"success_radius", t.success_radius},
                         {"goal_frame_file", image}});
  }
  json doc = {{"config", ToJson(tasks.config)}, {"instances", instances}};
  WriteTextFile(path, doc.dump(2) + "\n");
}

TaskSet LoadTaskSet(const std::string& path) {
  json doc;
  try {
    doc = json::parse(ReadTextFile(path));
  } catch (const json::exception& e) {
    throw IoError("cannot parse task file " + path + ": " + e.what());
  }
  const fs::path dir = fs::path(path).parent_path();
  TaskSet set;
  set.config = WorldConfigFromJson(doc.at("config"));
  for (const auto& j : doc.at("instances")) {
    TaskInstance t;
    t.id = j.at("id");
    t.category = j.at("category");
    ParseCategory(t.category, set.config);
    t.init_state = SimStateFromJson(j.at("init_state"));
    t.goal_state = SimStateFromJson(j.at("goal_state"));
    ValidateState(t.init_state, set.config);
    ValidateState(t.goal_state, set.config);
    t.success_radius = j.at("success_radius");
    t.goal_frame = ReadImageFile((dir / j.at("goal_frame_file").get<std::string>()).string());
    if (!(t.goal_frame == Render(t.goal_state, set.config))) {
      throw IoError("goal frame of " + t.id + " does not match its goal state");
    }
    set.instances.push_back(std::move(t));
  }
  return set;
}

}  // namespace foresight

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

#include "foresight/world/dataset.h"

#include <cmath>
#include <cstring>
#include <numbers>

#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {

std::vector<bool> DisplacementLabels(const SimState& initial,
                                     const SimState& state) {
  std::vector<bool> labels(state.objects.size());
  for (size_t k = 0; k < state.objects.size(); ++k) {
    const Vec2 a = initial.objects[k].pos, b = state.objects[k].pos;
    labels[k] = std::hypot(double(a.x) - b.x, double(a.y) - b.y) >
                kDefaultSuccessRadius;
  }
  return labels;
}

Episode CollectEpisode(const WorldConfig& config, float noise_sigma,
                       int traj_len, Rng& rng, const NoiseObserver& observer) {
  if (traj_len < 1) throw InvalidInputError("traj_len must be at least 1");
  Episode ep;
  SimState state = SampleInitialState(config, rng);
  const int target = static_cast<int>(rng.UniformInt(config.num_objects()));
  const float theta = static_cast<float>(rng.Uniform(0.0, std::numbers::pi));
  PushPlan plan = MakePushPlan(state, target, theta);
  const SimState initial = state;

  ep.states.push_back(state);
  ep.frames.push_back(Render(state, config));
  ep.success_labels.push_back(DisplacementLabels(initial, state));
  for (int t = 1; t < traj_len; ++t) {
    NoisyStepRecord rec;
    rec.deterministic = ScriptedPushPolicy(state, plan, config);
    const float nx = static_cast<float>(rng.Normal() * noise_sigma);
    const float ny = static_cast<float>(rng.Normal() * noise_sigma);
    rec.commanded = {{rec.deterministic.delta.x + nx,
                      rec.deterministic.delta.y + ny}};
    rec.executed = ClipAction(rec.commanded, config);
    if (observer) observer(rec);
    state = Step(state, rec.executed, config);
    ep.actions.push_back(rec.executed);
    ep.states.push_back(state);
    ep.frames.push_back(Render(state, config));
    ep.success_labels.push_back(DisplacementLabels(initial, state));
  }
  return ep;
}

size_t DatasetHeader::EpisodeBytes() const {
  const size_t hw = size_t(height) * width;
  return size_t(traj_len) * hw * 3 +
         sizeof(float) * (size_t(traj_len - 1) * action_dim +
                          size_t(traj_len) * n_categories * 2 +
                          size_t(traj_len) * 2) +
         size_t(traj_len) * n_categories;
}

Frame EpisodeRecord::FrameAt(const DatasetHeader& header, int t) const {
  const size_t n = size_t(header.height) * header.width * 3;
  return FrameFromBytes(header.height, header.width,
                        std::span(frames).subspan(n * t, n));
}

EpisodeRecord ToRecord(const Episode& episode) {
  EpisodeRecord rec;
  for (const auto& f : episode.frames) {
    const auto bytes = FrameToBytes(f);
    rec.frames.insert(rec.frames.end(), bytes.begin(), bytes.end());
  }
  for (const auto& a : episode.actions) {
    rec.actions.push_back(a.delta.x);
    rec.actions.push_back(a.delta.y);
  }
  for (const auto& s : episode.states) {
    for (const auto& o : s.objects) {
      rec.object_positions.push_back(o.pos.x);
      rec.object_positions.push_back(o.pos.y);
    }
    rec.pusher_positions.push_back(s.pusher_pos.x);
    rec.pusher_positions.push_back(s.pusher_pos.y);
  }
  for (const auto& labels : episode.success_labels) {
    for (bool b : labels) rec.success_labels.push_back(b ? 1 : 0);
  }
  return rec;
}

DatasetWriter::DatasetWriter(const std::string& path,
                             const DatasetHeader& header)
    : header_(header) {
  EnsureParentDirectory(path);
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot write dataset " + path);
  ByteWriter w;
  w.PutString(std::string_view(DatasetHeader::kMagic, 4));
  w.PutU8(DatasetHeader::kVersion);
  w.PutU32(header.n_episodes);
  w.PutU32(header.traj_len);
  w.PutU32(header.height);
  w.PutU32(header.width);
  w.PutU32(header.action_dim);
  w.PutU32(header.n_categories);
  out_.write(reinterpret_cast<const char*>(w.bytes().data()), w.size());
}

void DatasetWriter::Append(const EpisodeRecord& rec) {
  const auto& h = header_;
  if (written_ >= h.n_episodes) throw IoError("dataset already complete");
  if (rec.frames.size() != size_t(h.traj_len) * h.height * h.width * 3 ||
      rec.actions.size() != size_t(h.traj_len - 1) * h.action_dim ||
      rec.object_positions.size() != size_t(h.traj_len) * h.n_categories * 2 ||
      rec.pusher_positions.size() != size_t(h.traj_len) * 2 ||
      rec.success_labels.size() != size_t(h.traj_len) * h.n_categories) {
    throw InvalidInputError("episode record does not match dataset header");
  }
  ByteWriter w;
  w.PutBytes(rec.frames);
  w.PutF32s(rec.actions);
  w.PutF32s(rec.object_positions);
  w.PutF32s(rec.pusher_positions);
  w.PutBytes(rec.success_labels);
  out_.write(reinterpret_cast<const char*>(w.bytes().data()), w.size());
  if (!out_) throw IoError("dataset write failed");
  ++written_;
}

void DatasetWriter::Close() {
  if (written_ != header_.n_episodes) {
    throw IoError("dataset closed with missing episodes");
  }
  out_.close();
  if (!out_) throw IoError("dataset close failed");
}

DatasetReader::DatasetReader(const std::string& path)
    : in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open dataset " + path);
  std::vector<uint8_t> buf(DatasetHeader::kBytes);
  in_.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in_.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError("dataset header truncated: " + path);
  }
  ByteReader<IoError> r(buf);
  if (std::memcmp(r.GetBytes(4).data(), DatasetHeader::kMagic, 4) != 0) {
    throw IoError("bad dataset magic: " + path);
  }
  if (r.GetU8() != DatasetHeader::kVersion) {
    throw IoError("unsupported dataset version: " + path);
  }
  header_.n_episodes = r.GetU32();
  header_.traj_len = r.GetU32();
  header_.height = r.GetU32();
  header_.width = r.GetU32();
  header_.action_dim = r.GetU32();
  header_.n_categories = r.GetU32();
  if (header_.n_episodes > 0 && header_.traj_len < 1) {
    throw IoError("dataset traj_len must be positive");
  }
}

EpisodeRecord DatasetReader::Read(uint32_t index) {
  const auto& h = header_;
  if (index >= h.n_episodes) throw InvalidInputError("episode index out of range");
  const size_t bytes = h.EpisodeBytes();
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(DatasetHeader::kBytes + bytes * index));
  std::vector<uint8_t> buf(bytes);
  in_.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in_.gcount() != static_cast<std::streamsize>(bytes)) {
    throw IoError("dataset episode truncated");
  }
  ByteReader<IoError> r(buf);
  EpisodeRecord rec;
  auto frames = r.GetBytes(size_t(h.traj_len) * h.height * h.width * 3);
  rec.frames.assign(frames.begin(), frames.end());
  rec.actions.resize(size_t(h.traj_len - 1) * h.action_dim);
  r.GetF32s(rec.actions);
  rec.object_positions.resize(size_t(h.traj_len) * h.n_categories * 2);
  r.GetF32s(rec.object_positions);
  rec.pusher_positions.resize(size_t(h.traj_len) * 2);
  r.GetF32s(rec.pusher_positions);
  auto labels = r.GetBytes(size_t(h.traj_len) * h.n_categories);
  rec.success_labels.assign(labels.begin(), labels.end());
  return rec;
}

void CollectDataset(const WorldConfig& config, const DatasetOptions& options,
                    uint64_t seed, const std::string& path) {
  config.Validate();
  if (options.n_traj < 0) throw InvalidInputError("n_traj must be >= 0");
  if (options.traj_len < 2) throw InvalidInputError("traj_len must be >= 2");
  if (!(options.noise_sigma >= 0)) {
    throw InvalidInputError("noise_sigma must be >= 0");
  }
  DatasetHeader header;
  header.n_episodes = options.n_traj;
  header.traj_len = options.traj_len;
  header.height = header.width = config.render_resolution;
  header.action_dim = 2;
  header.n_categories = config.num_objects();
  DatasetWriter writer(path, header);
  Rng rng(seed);
  for (int i = 0; i < options.n_traj; ++i) {
    writer.Append(
        ToRecord(CollectEpisode(config, options.noise_sigma, options.traj_len, rng)));
  }
  writer.Close();
}

SimState RecoverState(const DatasetHeader& header, const EpisodeRecord& record,
                      int t, const WorldConfig& config) {
  const int n_obj = static_cast<int>(header.n_categories);
  if (n_obj != config.num_objects() ||
      static_cast<int>(header.height) != config.render_resolution) {
    throw InvalidInputError("dataset does not match world config");
  }
  const int res = config.render_resolution;
  const double scale = res / double(config.arena_side);
  SimState state;
  state.step_count = t;
  state.pusher_pos = {record.pusher_positions[2 * t],
                      record.pusher_positions[2 * t + 1]};
  for (int k = 0; k < n_obj; ++k) {
    ObjectState obj;
    obj.spec_index = k;
    obj.pos = {record.object_positions[(size_t(t) * n_obj + k) * 2],
               record.object_positions[(size_t(t) * n_obj + k) * 2 + 1]};
    // initial scenes never overlap, so frame 0 shows every object's color
    const float x0 = record.object_positions[k * 2];
    const float y0 = record.object_positions[k * 2 + 1];
    const int col = std::min(res - 1, static_cast<int>(x0 * scale));
    const int row = std::min(res - 1, static_cast<int>(y0 * scale));
    const uint8_t* px = &record.frames[(size_t(row) * res + col) * 3];
    obj.color_index = -1;
    for (int c = 0; c < static_cast<int>(config.color_palette.size()); ++c) {
      const Rgb& rgb = config.color_palette[c];
      if (rgb.r == px[0] && rgb.g == px[1] && rgb.b == px[2]) {
        obj.color_index = c;
        break;
      }
    }
    if (obj.color_index < 0) {
      throw InvalidInputError("cannot recover color of object " +
                              std::to_string(k));
    }
    state.objects.push_back(obj);
  }
  return state;
}

}  // namespace foresight

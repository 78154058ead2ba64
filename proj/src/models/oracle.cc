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

#include "foresight/models/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {
namespace {

constexpr size_t kNoiseTapeSize = size_t{1} << 20;

void CheckToken(const HiddenStateToken* token, const WorldConfig& config) {
  if (token == nullptr) throw InvalidInputError("oracle requires a hidden state token");
  ValidateState(token->state, config);
}

}  // namespace

OracleModel::OracleModel(WorldConfig config, std::string name)
    : config_(std::move(config)), name_(std::move(name)) {
  config_.Validate();
}

void OracleModel::Rollout(const SimState& state,
                          std::span<const float> future_actions, int horizon,
                          std::span<float> out) const {
  const size_t frame_size =
      size_t(config_.render_resolution) * config_.render_resolution * 3;
  SimState s = state;
  for (int t = 0; t < horizon; ++t) {
    s = Step(s, {{future_actions[2 * t], future_actions[2 * t + 1]}}, config_);
    RenderInto(s, config_, out.subspan(frame_size * t, frame_size));
  }
}

PredictionResponse OracleModel::PredictImpl(const PredictionRequest& request,
                                            const HiddenStateToken* token) {
  CheckToken(token, config_);
  if (request.action_dim != 2) throw InvalidInputError("oracle expects 2-D actions");
  if (request.height() != config_.render_resolution ||
      request.width() != config_.render_resolution) {
    throw InvalidInputError("context resolution does not match the world");
  }
  PredictionResponse response(request.batch, request.horizon, request.height(),
                              request.width());
  const int past = request.context_len() - 1;
  for (int b = 0; b < request.batch; ++b) {
    auto actions = request.ActionsFor(b).subspan(size_t(past) * 2);
    Rollout(token->state, actions, request.horizon, response.Rollout(b));
  }
  return response;
}

const char* DegradationKindName(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kBlur: return "blur";
    case DegradationKind::kPixelNoise: return "pixel_noise";
    case DegradationKind::kActionBlind: return "action_blind";
    case DegradationKind::kLagged: return "lagged";
  }
  return "unknown";
}

DegradationKind ParseDegradationKind(const std::string& name) {
  if (name == "blur") return DegradationKind::kBlur;
  if (name == "pixel_noise" || name == "noise") return DegradationKind::kPixelNoise;
  if (name == "action_blind") return DegradationKind::kActionBlind;
  if (name == "lagged") return DegradationKind::kLagged;
  throw ConfigError("unknown degradation kind '" + name + "'");
}

DegradedModel::DegradedModel(std::shared_ptr<OracleModel> base,
                             DegradationKind kind, double strength,
                             uint64_t seed, std::string name)
    : base_(std::move(base)),
      degradation_(kind),
      strength_(strength),
      seed_(seed),
      name_(std::move(name)) {
  if (!base_) throw ConfigError("degraded model needs an oracle base");
  if (!(strength >= 0) || !std::isfinite(strength)) {
    throw ConfigError("degradation strength must be finite and >= 0");
  }
  if (kind == DegradationKind::kBlur && strength > 0) {
    const int radius = static_cast<int>(std::ceil(3.0 * strength));
    kernel_.resize(2 * radius + 1);
    double total = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      const double w = std::exp(-0.5 * k * k / (strength * strength));
      kernel_[k + radius] = static_cast<float>(w);
      total += w;
    }
    for (auto& w : kernel_) w = static_cast<float>(w / total);
  }
  if (kind == DegradationKind::kPixelNoise && strength > 0) {
    Rng rng(DeriveSeed(seed, "pixel_noise_tape"));
    noise_tape_.resize(kNoiseTapeSize);
    for (auto& z : noise_tape_) z = static_cast<float>(rng.Normal());
  }
}

void DegradedModel::Blur(std::span<float> frame, int height, int width) const {
  const int radius = static_cast<int>(kernel_.size() / 2);
  const int row_len = width * 3;
  std::vector<float> padded((width + 2 * radius) * 3);
  std::vector<float> horizontal(frame.size());

  for (int r = 0; r < height; ++r) {
    const float* src = &frame[size_t(r) * row_len];
    for (int c = -radius; c < width + radius; ++c) {
      const int cc = std::clamp(c, 0, width - 1);
      std::memcpy(&padded[(c + radius) * 3], &src[cc * 3], 3 * sizeof(float));
    }
    float* dst = &horizontal[size_t(r) * row_len];
    std::fill(dst, dst + row_len, 0.0f);
    for (size_t k = 0; k < kernel_.size(); ++k) {
      const float w = kernel_[k];
      const float* p = &padded[k * 3];
      for (int i = 0; i < row_len; ++i) dst[i] += w * p[i];
    }
  }
  for (int r = 0; r < height; ++r) {
    float* dst = &frame[size_t(r) * row_len];
    std::fill(dst, dst + row_len, 0.0f);
    for (int k = -radius; k <= radius; ++k) {
      const float w = kernel_[k + radius];
      const float* p = &horizontal[size_t(std::clamp(r + k, 0, height - 1)) * row_len];
      for (int i = 0; i < row_len; ++i) dst[i] += w * p[i];
    }
  }
}

void DegradedModel::AddNoise(std::span<float> rollout, uint64_t key) const {
  // Each rollout reads a contiguous window of the tape at a keyed offset, so
  // values within one rollout are distinct draws.
  size_t offset = key % kNoiseTapeSize;
  const float s = static_cast<float>(strength_);
  for (float& v : rollout) {
    v = std::clamp(v + s * noise_tape_[offset], 0.0f, 1.0f);
    if (++offset == kNoiseTapeSize) offset = 0;
  }
}

PredictionResponse DegradedModel::PredictImpl(const PredictionRequest& request,
                                              const HiddenStateToken* token) {
  const int past = request.context_len() - 1;
  const size_t row = size_t(request.action_len()) * request.action_dim;

  if (degradation_ == DegradationKind::kActionBlind ||
      degradation_ == DegradationKind::kLagged) {
    PredictionRequest altered = request;
    for (int b = 0; b < request.batch; ++b) {
      float* a = &altered.actions[row * b];
      if (degradation_ == DegradationKind::kActionBlind) {
        std::fill(a, a + row, 0.0f);
      } else {
        const float* orig = &request.actions[row * b];
        const int dim = request.action_dim;
        for (int t = 0; t < request.horizon; ++t) {
          for (int d = 0; d < dim; ++d) {
            a[(past + t) * dim + d] = t == 0 ? 0.0f : orig[(past + t - 1) * dim + d];
          }
        }
      }
    }
    return base_->PredictImpl(altered, token);
  }

  PredictionResponse response = base_->PredictImpl(request, token);
  if (strength_ == 0.0) return response;
  if (degradation_ == DegradationKind::kBlur) {
    for (int b = 0; b < response.batch; ++b) {
      for (int t = 0; t < response.horizon; ++t) {
        Blur(response.Rollout(b).subspan(response.FrameSize() * t,
                                         response.FrameSize()),
             response.height, response.width);
      }
    }
  } else {
    uint64_t context_hash = seed_;
    for (const auto& f : request.context) {
      context_hash = HashSpan(f.data(), context_hash);
    }
    for (int b = 0; b < response.batch; ++b) {
      const uint64_t key = HashSpan(request.ActionsFor(b), context_hash);
      AddNoise(response.Rollout(b), key);
    }
  }
  return response;
}

std::shared_ptr<DegradedModel> MakeDegraded(std::shared_ptr<OracleModel> base,
                                            DegradationKind kind,
                                            double strength, uint64_t seed) {
  std::string name = DegradationKindName(kind);
  if (kind == DegradationKind::kBlur || kind == DegradationKind::kPixelNoise) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), ":%g", strength);
    name += buf;
  }
  return std::make_shared<DegradedModel>(std::move(base), kind, strength, seed,
                                         std::move(name));
}

}  // namespace foresight

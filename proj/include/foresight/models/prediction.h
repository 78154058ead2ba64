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

#ifndef FORESIGHT_MODELS_PREDICTION_H_
#define FORESIGHT_MODELS_PREDICTION_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "foresight/common/frame.h"
#include "foresight/world/world.h"

namespace foresight {

// Batched forward-pass input. Each candidate carries the T_c - 1 actions that
// produced the context frames followed by the T_plan actions to predict.
struct PredictionRequest {
  std::vector<Frame> context;  // oldest first
  int batch = 0;
  int horizon = 10;
  int action_dim = 2;
  std::vector<float> actions;  // [batch x action_len() x action_dim]

  int context_len() const { return static_cast<int>(context.size()); }
  int action_len() const { return context_len() - 1 + horizon; }
  std::span<const float> ActionsFor(int b) const {
    const size_t n = size_t(action_len()) * action_dim;
    return std::span(actions).subspan(n * b, n);
  }
  int height() const { return context.empty() ? 0 : context.front().height; }
  int width() const { return context.empty() ? 0 : context.front().width; }

  // Throws InvalidInputError when shapes or values break the contract.
  void Validate() const;
};

// [batch x horizon x H x W x 3], values in [0, 1].
struct PredictionResponse {
  int batch = 0;
  int horizon = 0;
  int height = 0;
  int width = 0;
  int channels = Frame::kChannels;
  std::vector<float> frames;

  PredictionResponse() = default;
  PredictionResponse(int b, int t, int h, int w)
      : batch(b), horizon(t), height(h), width(w),
        frames(size_t(b) * t * h * w * Frame::kChannels) {}

  size_t FrameSize() const { return size_t(height) * width * channels; }
  size_t RolloutSize() const { return FrameSize() * horizon; }
  std::span<float> Rollout(int b) {
    return std::span(frames).subspan(RolloutSize() * b, RolloutSize());
  }
  std::span<const float> Rollout(int b) const {
    return std::span(frames).subspan(RolloutSize() * b, RolloutSize());
  }
  std::span<const float> FrameAt(int b, int t) const {
    return Rollout(b).subspan(FrameSize() * t, FrameSize());
  }
  Frame ToFrame(int b, int t) const;

  bool operator==(const PredictionResponse&) const = default;
};

// Simulator snapshot handed to in-process oracle-backed models. Never sent
// over the wire.
struct HiddenStateToken {
  SimState state;
};

enum class ModelKind { kOracle, kDegraded, kEnsemble, kRemote };

const char* ModelKindName(ModelKind kind);

class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual const std::string& name() const = 0;
  virtual ModelKind kind() const = 0;
  bool needs_token() const {
    return kind() == ModelKind::kOracle || kind() == ModelKind::kDegraded;
  }

  // Implementations may assume the request has been validated.
  virtual PredictionResponse PredictImpl(const PredictionRequest& request,
                                         const HiddenStateToken* token) = 0;
};

using ModelHandle = std::shared_ptr<ForwardModel>;

// Validates the request and token, calls the model, then checks the response
// shape and clips it to [0, 1]. Non-finite outputs raise ProtocolError.
PredictionResponse Predict(ForwardModel& model,
                           const PredictionRequest& request,
                           const HiddenStateToken* token);

// Checks dimensions against the request, rejects non-finite values and clips
// to [0, 1] in place.
void CheckAndClipResponse(const PredictionRequest& request,
                          PredictionResponse& response);

}  // namespace foresight

#endif  // FORESIGHT_MODELS_PREDICTION_H_

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

#include "foresight/models/prediction.h"

#include <algorithm>
#include <cmath>

#include "foresight/common/errors.h"

namespace foresight {

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kOracle: return "oracle";
    case ModelKind::kDegraded: return "degraded";
    case ModelKind::kEnsemble: return "ensemble";
    case ModelKind::kRemote: return "remote";
  }
  return "unknown";
}

void PredictionRequest::Validate() const {
  if (context.empty()) throw InvalidInputError("request has no context frames");
  if (batch < 1) throw InvalidInputError("request batch must be >= 1");
  if (horizon < 1) throw InvalidInputError("request horizon must be >= 1");
  if (action_dim < 1) throw InvalidInputError("request action_dim must be >= 1");
  const int h = context.front().height, w = context.front().width;
  for (const auto& f : context) {
    if (f.height != h || f.width != w ||
        f.size() != size_t(h) * w * Frame::kChannels) {
      throw InvalidInputError("context frames have inconsistent shapes");
    }
    for (float v : f.pixels) {
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw InvalidInputError("context frame value outside [0, 1]");
      }
    }
  }
  if (actions.size() != size_t(batch) * action_len() * action_dim) {
    throw InvalidInputError("action tensor must be [B x (T_c - 1 + T_plan) x A]");
  }
  for (float a : actions) {
    if (!std::isfinite(a)) throw InvalidInputError("non-finite action");
  }
}

Frame PredictionResponse::ToFrame(int b, int t) const {
  Frame f(height, width);
  auto src = FrameAt(b, t);
  std::copy(src.begin(), src.end(), f.pixels.begin());
  return f;
}

void CheckAndClipResponse(const PredictionRequest& request,
                          PredictionResponse& response) {
  if (response.batch != request.batch || response.horizon != request.horizon ||
      response.height != request.height() || response.width != request.width() ||
      response.channels != Frame::kChannels ||
      response.frames.size() != size_t(response.batch) * response.RolloutSize()) {
    throw ProtocolError("prediction dimensions do not match the request");
  }
  for (float& v : response.frames) {
    if (!std::isfinite(v)) throw ProtocolError("prediction contains non-finite values");
    v = std::clamp(v, 0.0f, 1.0f);
  }
}

PredictionResponse Predict(ForwardModel& model,
                           const PredictionRequest& request,
                           const HiddenStateToken* token) {
  request.Validate();
  if (model.needs_token() && token == nullptr) {
    throw InvalidInputError(model.name() + " requires a hidden state token");
  }
  if (model.kind() == ModelKind::kRemote && token != nullptr) {
    throw InvalidInputError("hidden state tokens are never sent to remote models");
  }
  PredictionResponse response = model.PredictImpl(request, token);
  CheckAndClipResponse(request, response);
  return response;
}

}  // namespace foresight

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

#include "foresight/models/server.h"

#include <algorithm>

#include "foresight/common/errors.h"
#include "foresight/common/random.h"

namespace foresight {

bool PersistenceServedModel::Supports(const protocol::Signature& s) const {
  return s.channels == 3 && s.context_frames >= 1 && s.horizon >= 1 &&
         s.height >= 1 && s.width >= 1 && s.action_dim >= 1;
}

PredictionResponse PersistenceServedModel::Predict(const PredictionRequest& request) {
  PredictionResponse out(request.batch, request.horizon, request.height(),
                         request.width());
  const auto last = request.context.back().data();
  for (int b = 0; b < request.batch; ++b) {
    auto r = out.Rollout(b);
    for (int t = 0; t < request.horizon; ++t) {
      std::copy(last.begin(), last.end(), r.begin() + last.size() * t);
    }
  }
  return out;
}

LoopbackOracleServedModel::LoopbackOracleServedModel(
    std::shared_ptr<OracleModel> oracle, uint32_t max_batch)
    : oracle_(std::move(oracle)), max_batch_(max_batch) {}

bool LoopbackOracleServedModel::Supports(const protocol::Signature& s) const {
  const int res = oracle_->config().render_resolution;
  return s.channels == 3 && s.height == res && s.width == res &&
         s.action_dim == 2 && s.context_frames >= 1 && s.horizon >= 1;
}

void LoopbackOracleServedModel::RegisterState(const SimState& state) {
  const Frame f = Render(state, oracle_->config());
  std::lock_guard<std::mutex> lock(mutex_);
  states_[HashSpan(f.data())] = state;
}

PredictionResponse LoopbackOracleServedModel::Predict(
    const PredictionRequest& request) {
  HiddenStateToken token;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = states_.find(HashSpan(request.context.back().data()));
    if (it == states_.end()) {
      throw InvalidInputError("no registered state for this context frame");
    }
    token.state = it->second;
  }
  return oracle_->PredictImpl(request, &token);
}

ServeStats Serve(Transport& transport, ServedModel& model,
                 Milliseconds idle_timeout) {
  using protocol::MsgType;
  ServeStats stats;
  protocol::MessageParser parser;
  std::vector<uint8_t> buf(1 << 16);
  auto send_error = [&](uint32_t code, const std::string& msg) {
    WriteMessage(transport, protocol::MakeError({code, msg}));
    ++stats.errors_sent;
  };
  for (;;) {
    std::optional<protocol::Message> m;
    try {
      m = parser.Next();
    } catch (const ProtocolError& e) {
      parser.Reset();
      send_error(protocol::kBadRequest, e.what());
      continue;
    }
    if (!m) {
      const size_t n = transport.ReadSome(buf, idle_timeout);
      if (n == 0) {
        if (parser.buffered() > 0) {
          send_error(protocol::kBadRequest, "truncated message");
        }
        return stats;
      }
      parser.Feed(std::span(buf.data(), n));
      continue;
    }
    ++stats.messages;
    try {
      switch (m->type) {
        case MsgType::kHello: {
          const auto sig = protocol::ParseHello(*m);
          if (!model.Supports(sig)) {
            send_error(protocol::kUnsupportedShape, "unsupported shape");
            break;
          }
          WriteMessage(transport, protocol::MakeHelloAck({model.name(), model.max_batch()}));
          break;
        }
        case MsgType::kPredict: {
          PredictionRequest req;
          try {
            req = protocol::ParsePredict(*m);
            req.Validate();
          } catch (const Error& e) {
            send_error(protocol::kBadRequest, e.what());
            break;
          }
          if (req.batch > static_cast<int>(model.max_batch())) {
            send_error(protocol::kBadRequest, "batch exceeds max_batch");
            break;
          }
          PredictionResponse resp;
          try {
            resp = model.Predict(req);
          } catch (const std::exception& e) {
            send_error(protocol::kInternalFailure, e.what());
            break;
          }
          WriteMessage(transport, protocol::MakePredictResponse(resp));
          break;
        }
        default:
          send_error(protocol::kBadRequest, "unexpected message type");
      }
    } catch (const ProtocolError& e) {
      send_error(protocol::kBadRequest, e.what());
    }
  }
}

}  // namespace foresight

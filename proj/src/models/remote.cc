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

#include "foresight/models/remote.h"

#include <algorithm>

#include "foresight/common/errors.h"

namespace foresight {
namespace {

[[noreturn]] void ThrowRemoteError(const protocol::Message& m) {
  const auto err = protocol::ParseError(m);
  throw RemoteModelError(err.code, err.message);
}

}  // namespace

RemoteModel::RemoteModel(std::unique_ptr<Transport> transport,
                         protocol::Signature signature, protocol::HelloAck ack,
                         Milliseconds timeout)
    : transport_(std::move(transport)),
      signature_(signature),
      ack_(std::move(ack)),
      timeout_(timeout) {}

protocol::Message RemoteModel::Exchange(const protocol::Message& message) {
  WriteMessage(*transport_, message);
  auto reply = ReadMessage(*transport_, parser_, timeout_);
  if (!reply) throw ConnectionError("model server closed the connection");
  if (reply->type == protocol::MsgType::kError) ThrowRemoteError(*reply);
  return std::move(*reply);
}

PredictionResponse RemoteModel::PredictImpl(const PredictionRequest& request,
                                            const HiddenStateToken*) {
  const auto& s = signature_;
  if (request.context_len() != s.context_frames || request.horizon != s.horizon ||
      request.height() != s.height || request.width() != s.width ||
      request.action_dim != s.action_dim) {
    throw InvalidInputError("request does not match the negotiated signature");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  PredictionResponse out(request.batch, request.horizon, request.height(),
                         request.width());
  const size_t row = size_t(request.action_len()) * request.action_dim;
  for (int start = 0; start < request.batch;
       start += static_cast<int>(ack_.max_batch)) {
    const int count =
        std::min<int>(static_cast<int>(ack_.max_batch), request.batch - start);
    PredictionRequest chunk;
    chunk.context = request.context;
    chunk.batch = count;
    chunk.horizon = request.horizon;
    chunk.action_dim = request.action_dim;
    chunk.actions.assign(request.actions.begin() + row * start,
                         request.actions.begin() + row * (start + count));
    ++predict_messages_;
    const auto reply = Exchange(protocol::MakePredict(chunk));
    if (reply.type != protocol::MsgType::kPredictResponse) {
      throw ProtocolError("expected PREDICT_RESPONSE");
    }
    PredictionResponse part = protocol::ParsePredictResponse(reply);
    CheckAndClipResponse(chunk, part);
    std::copy(part.frames.begin(), part.frames.end(),
              out.frames.begin() + out.RolloutSize() * start);
  }
  return out;
}

std::shared_ptr<RemoteModel> RemoteHandshake(
    std::unique_ptr<Transport> transport, const protocol::Signature& signature,
    Milliseconds timeout) {
  protocol::MessageParser parser;
  WriteMessage(*transport, protocol::MakeHello(signature));
  auto reply = ReadMessage(*transport, parser, timeout);
  if (!reply) throw ConnectionError("model server closed during handshake");
  if (reply->type == protocol::MsgType::kError) ThrowRemoteError(*reply);
  auto ack = protocol::ParseHelloAck(*reply);
  return std::make_shared<RemoteModel>(std::move(transport), signature,
                                       std::move(ack), timeout);
}

}  // namespace foresight

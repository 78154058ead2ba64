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

#ifndef FORESIGHT_MODELS_REMOTE_H_
#define FORESIGHT_MODELS_REMOTE_H_

#include <memory>
#include <mutex>
#include <string>

#include "foresight/models/prediction.h"
#include "foresight/models/protocol.h"
#include "foresight/models/transport.h"

namespace foresight {

// Out-of-process model behind the prediction protocol. Requests larger than
// the server's max_batch are split into consecutive PREDICT messages and the
// responses concatenated in order. One request is in flight at a time.
class RemoteModel : public ForwardModel {
 public:
  RemoteModel(std::unique_ptr<Transport> transport,
              protocol::Signature signature, protocol::HelloAck ack,
              Milliseconds timeout);

  const std::string& name() const override { return ack_.model_name; }
  ModelKind kind() const override { return ModelKind::kRemote; }
  const protocol::Signature& signature() const { return signature_; }
  uint32_t max_batch() const { return ack_.max_batch; }
  // Number of PREDICT messages sent so far.
  int predict_messages() const { return predict_messages_; }

  PredictionResponse PredictImpl(const PredictionRequest& request,
                                 const HiddenStateToken* token) override;

  Transport& transport() { return *transport_; }

 private:
  protocol::Message Exchange(const protocol::Message& message);

  std::unique_ptr<Transport> transport_;
  protocol::Signature signature_;
  protocol::HelloAck ack_;
  Milliseconds timeout_;
  protocol::MessageParser parser_;
  std::mutex mutex_;
  int predict_messages_ = 0;
};

// Sends HELLO and waits for HELLO_ACK. Timeouts raise ConnectionError; wrong
// magic/version or an unexpected reply raise ProtocolError; an ERROR reply
// raises RemoteModelError.
std::shared_ptr<RemoteModel> RemoteHandshake(
    std::unique_ptr<Transport> transport, const protocol::Signature& signature,
    Milliseconds timeout = kDefaultTimeout);

}  // namespace foresight

#endif  // FORESIGHT_MODELS_REMOTE_H_

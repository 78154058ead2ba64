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

#ifndef FORESIGHT_MODELS_PROTOCOL_H_
#define FORESIGHT_MODELS_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foresight/models/prediction.h"

namespace foresight {

// Prediction wire protocol. Every message is
//   "VPFM" | u8 version (1) | u8 msg_type | u32 LE payload_length | payload
// over either a subprocess's stdin/stdout or a TCP stream.
namespace protocol {

inline constexpr char kMagic[4] = {'V', 'P', 'F', 'M'};
inline constexpr uint8_t kVersion = 1;
inline constexpr size_t kHeaderBytes = 4 + 1 + 1 + 4;
// Payloads above this are rejected as framing violations.
inline constexpr uint32_t kMaxPayloadBytes = 1u << 30;

enum class MsgType : uint8_t {
  kHello = 1,
  kHelloAck = 2,
  kPredict = 3,
  kPredictResponse = 4,
  kError = 5,
};

enum ErrorCode : uint32_t {
  kBadRequest = 1,
  kInternalFailure = 2,
  kUnsupportedShape = 3,
};

struct Message {
  MsgType type = MsgType::kError;
  std::vector<uint8_t> payload;
};

std::vector<uint8_t> Encode(const Message& message);

// Incremental decoder: bytes may arrive in arbitrary chunks.
class MessageParser {
 public:
  void Feed(std::span<const uint8_t> bytes);
  // Returns the next complete message, if any. Throws ProtocolError on a bad
  // magic, version, message type or oversized payload.
  std::optional<Message> Next();
  size_t buffered() const { return buffer_.size() - start_; }
  void Reset() {
    buffer_.clear();
    start_ = 0;
  }

 private:
  std::vector<uint8_t> buffer_;
  size_t start_ = 0;
};

// Shape agreement negotiated by HELLO.
struct Signature {
  int context_frames = 2;
  int horizon = 10;
  int height = 64;
  int width = 64;
  int channels = 3;
  int action_dim = 2;
  bool operator==(const Signature&) const = default;
};

struct HelloAck {
  std::string model_name;
  uint32_t max_batch = 1;
};

struct ErrorInfo {
  uint32_t code = kBadRequest;
  std::string message;
};

Message MakeHello(const Signature& signature);
Signature ParseHello(const Message& message);
Message MakeHelloAck(const HelloAck& ack);
HelloAck ParseHelloAck(const Message& message);
Message MakePredict(const PredictionRequest& request);
PredictionRequest ParsePredict(const Message& message);
Message MakePredictResponse(const PredictionResponse& response);
PredictionResponse ParsePredictResponse(const Message& message);
Message MakeError(const ErrorInfo& error);
ErrorInfo ParseError(const Message& message);

}  // namespace protocol
}  // namespace foresight

#endif  // FORESIGHT_MODELS_PROTOCOL_H_

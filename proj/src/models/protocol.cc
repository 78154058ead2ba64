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

#include "foresight/models/protocol.h"

#include <cstring>

#include "json.hpp"

#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"

namespace foresight::protocol {
namespace {

using Reader = ByteReader<ProtocolError>;

void ExpectType(const Message& m, MsgType type, const char* what) {
  if (m.type != type) {
    throw ProtocolError(std::string("expected ") + what + ", got message type " +
                        std::to_string(static_cast<int>(m.type)));
  }
}

void ExpectConsumed(const Reader& r, const char* what) {
  if (r.remaining() != 0) {
    throw ProtocolError(std::string("trailing bytes in ") + what);
  }
}

nlohmann::ordered_json ParseJsonPayload(const Message& m) {
  try {
    return nlohmann::ordered_json::parse(m.payload.begin(), m.payload.end());
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed JSON payload: ") + e.what());
  }
}

uint32_t CheckedDim(Reader& r, const char* name) {
  const uint32_t v = r.GetU32();
  if (v == 0 || v > (1u << 20)) {
    throw ProtocolError(std::string("invalid dimension ") + name);
  }
  return v;
}

}  // namespace

std::vector<uint8_t> Encode(const Message& m) {
  ByteWriter w;
  w.PutString(std::string_view(kMagic, 4));
  w.PutU8(kVersion);
  w.PutU8(static_cast<uint8_t>(m.type));
  w.PutU32(static_cast<uint32_t>(m.payload.size()));
  w.PutBytes(m.payload);
  return w.Release();
}

void MessageParser::Feed(std::span<const uint8_t> bytes) {
  if (start_ > 0 && start_ == buffer_.size()) Reset();
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> MessageParser::Next() {
  const size_t avail = buffer_.size() - start_;
  if (avail == 0) return std::nullopt;
  const uint8_t* p = buffer_.data() + start_;
  // validate the header as soon as its bytes are present
  const size_t magic_seen = std::min<size_t>(avail, 4);
  if (std::memcmp(p, kMagic, magic_seen) != 0) throw ProtocolError("bad magic");
  if (avail >= 5 && p[4] != kVersion) {
    throw ProtocolError("unsupported protocol version " + std::to_string(p[4]));
  }
  if (avail >= 6 && (p[5] < 1 || p[5] > 5)) {
    throw ProtocolError("unknown message type " + std::to_string(p[5]));
  }
  if (avail < kHeaderBytes) return std::nullopt;
  uint32_t length;
  std::memcpy(&length, p + 6, 4);
  if (length > kMaxPayloadBytes) throw ProtocolError("payload too large");
  if (avail < kHeaderBytes + length) return std::nullopt;
  Message m;
  m.type = static_cast<MsgType>(p[5]);
  m.payload.assign(p + kHeaderBytes, p + kHeaderBytes + length);
  start_ += kHeaderBytes + length;
  if (start_ == buffer_.size()) Reset();
  return m;
}

Message MakeHello(const Signature& s) {
  nlohmann::ordered_json j;
  j["context_frames"] = s.context_frames;
  j["horizon"] = s.horizon;
  j["height"] = s.height;
  j["width"] = s.width;
  j["channels"] = s.channels;
  j["action_dim"] = s.action_dim;
  const std::string text = j.dump();
  return {MsgType::kHello, std::vector<uint8_t>(text.begin(), text.end())};
}

Signature ParseHello(const Message& m) {
  ExpectType(m, MsgType::kHello, "HELLO");
  const auto j = ParseJsonPayload(m);
  Signature s;
  try {
    s.context_frames = j.at("context_frames");
    s.horizon = j.at("horizon");
    s.height = j.at("height");
    s.width = j.at("width");
    s.channels = j.at("channels");
    s.action_dim = j.at("action_dim");
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad HELLO: ") + e.what());
  }
  return s;
}

Message MakeHelloAck(const HelloAck& ack) {
  nlohmann::ordered_json j;
  j["model_name"] = ack.model_name;
  j["max_batch"] = ack.max_batch;
  const std::string text = j.dump();
  return {MsgType::kHelloAck, std::vector<uint8_t>(text.begin(), text.end())};
}

HelloAck ParseHelloAck(const Message& m) {
  ExpectType(m, MsgType::kHelloAck, "HELLO_ACK");
  const auto j = ParseJsonPayload(m);
  HelloAck ack;
  try {
    ack.model_name = j.at("model_name").get<std::string>();
    const int64_t max_batch = j.at("max_batch").get<int64_t>();
    if (max_batch < 1 || max_batch > (int64_t{1} << 31)) {
      throw ProtocolError("HELLO_ACK max_batch must be >= 1");
    }
    ack.max_batch = static_cast<uint32_t>(max_batch);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad HELLO_ACK: ") + e.what());
  }
  return ack;
}

Message MakePredict(const PredictionRequest& r) {
  ByteWriter w;
  w.PutU32(r.batch);
  w.PutU32(r.context_len());
  w.PutU32(r.horizon);
  w.PutU32(r.height());
  w.PutU32(r.width());
  w.PutU32(Frame::kChannels);
  w.PutU32(r.action_dim);
  for (const auto& f : r.context) w.PutF32s(f.data());
  w.PutF32s(r.actions);
  return {MsgType::kPredict, w.Release()};
}

PredictionRequest ParsePredict(const Message& m) {
  ExpectType(m, MsgType::kPredict, "PREDICT");
  Reader r(m.payload);
  PredictionRequest req;
  req.batch = CheckedDim(r, "B");
  const uint32_t tc = CheckedDim(r, "T_c");
  req.horizon = CheckedDim(r, "T_plan");
  const uint32_t h = CheckedDim(r, "H"), w = CheckedDim(r, "W");
  const uint32_t c = CheckedDim(r, "C");
  req.action_dim = CheckedDim(r, "A");
  if (c != Frame::kChannels) throw ProtocolError("only 3-channel frames are supported");
  const size_t expected =
      (size_t(tc) * h * w * c +
       size_t(req.batch) * (tc - 1 + req.horizon) * req.action_dim) * 4;
  if (r.remaining() != expected) {
    throw ProtocolError("PREDICT payload length does not match its header");
  }
  for (uint32_t t = 0; t < tc; ++t) {
    Frame f(h, w);
    r.GetF32s(f.data());
    req.context.push_back(std::move(f));
  }
  req.actions.resize(size_t(req.batch) * (tc - 1 + req.horizon) * req.action_dim);
  r.GetF32s(req.actions);
  ExpectConsumed(r, "PREDICT");
  return req;
}

Message MakePredictResponse(const PredictionResponse& p) {
  ByteWriter w;
  w.PutU32(p.batch);
  w.PutU32(p.horizon);
  w.PutU32(p.height);
  w.PutU32(p.width);
  w.PutU32(p.channels);
  w.PutF32s(p.frames);
  return {MsgType::kPredictResponse, w.Release()};
}

PredictionResponse ParsePredictResponse(const Message& m) {
  ExpectType(m, MsgType::kPredictResponse, "PREDICT_RESPONSE");
  Reader r(m.payload);
  PredictionResponse p;
  p.batch = CheckedDim(r, "B");
  p.horizon = CheckedDim(r, "T_plan");
  p.height = CheckedDim(r, "H");
  p.width = CheckedDim(r, "W");
  p.channels = CheckedDim(r, "C");
  const size_t n = size_t(p.batch) * p.horizon * p.height * p.width * p.channels;
  if (r.remaining() != n * 4) {
    throw ProtocolError("PREDICT_RESPONSE payload length does not match its header");
  }
  p.frames.resize(n);
  r.GetF32s(p.frames);
  return p;
}

Message MakeError(const ErrorInfo& e) {
  ByteWriter w;
  w.PutU32(e.code);
  w.PutU32(static_cast<uint32_t>(e.message.size()));
  w.PutString(e.message);
  return {MsgType::kError, w.Release()};
}

ErrorInfo ParseError(const Message& m) {
  ExpectType(m, MsgType::kError, "ERROR");
  Reader r(m.payload);
  ErrorInfo e;
  e.code = r.GetU32();
  const uint32_t len = r.GetU32();
  e.message = r.GetString(len);
  ExpectConsumed(r, "ERROR");
  return e;
}

}  // namespace foresight::protocol

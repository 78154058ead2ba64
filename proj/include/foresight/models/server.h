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

#ifndef FORESIGHT_MODELS_SERVER_H_
#define FORESIGHT_MODELS_SERVER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "foresight/models/oracle.h"
#include "foresight/models/protocol.h"
#include "foresight/models/transport.h"

namespace foresight {

// Model side of the prediction protocol: sees frames and actions only.
class ServedModel {
 public:
  virtual ~ServedModel() = default;
  virtual std::string name() const = 0;
  virtual uint32_t max_batch() const = 0;
  virtual bool Supports(const protocol::Signature& signature) const = 0;
  virtual PredictionResponse Predict(const PredictionRequest& request) = 0;
};

// Repeats the last context frame for every step of every candidate.
class PersistenceServedModel : public ServedModel {
 public:
  explicit PersistenceServedModel(uint32_t max_batch = 64) : max_batch_(max_batch) {}
  std::string name() const override { return "persistence"; }
  uint32_t max_batch() const override { return max_batch_; }
  bool Supports(const protocol::Signature& s) const override;
  PredictionResponse Predict(const PredictionRequest& request) override;

 private:
  uint32_t max_batch_;
};

// Engine-side loopback: an oracle behind the wire protocol. Since the wire
// carries no simulator state, the engine registers the state behind each
// context frame it will send; the server looks it up by the bytes of the
// last context frame.
class LoopbackOracleServedModel : public ServedModel {
 public:
  explicit LoopbackOracleServedModel(std::shared_ptr<OracleModel> oracle,
                                     uint32_t max_batch = 64);
  std::string name() const override { return oracle_->name(); }
  uint32_t max_batch() const override { return max_batch_; }
  bool Supports(const protocol::Signature& s) const override;
  PredictionResponse Predict(const PredictionRequest& request) override;

  // Registers `state` under the render of that state.
  void RegisterState(const SimState& state);

 private:
  std::shared_ptr<OracleModel> oracle_;
  uint32_t max_batch_;
  std::mutex mutex_;
  std::map<uint64_t, SimState> states_;
};

struct ServeStats {
  int messages = 0;
  int errors_sent = 0;
};

// Answers messages until the peer closes the stream. Malformed framing gets
// ERROR 1 and the buffered bytes are dropped; bad requests get ERROR 1;
// unsupported shapes ERROR 3; model exceptions ERROR 2.
ServeStats Serve(Transport& transport, ServedModel& model,
                 Milliseconds idle_timeout = Milliseconds(24 * 3600 * 1000));

}  // namespace foresight

#endif  // FORESIGHT_MODELS_SERVER_H_

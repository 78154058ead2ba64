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

// Serves a built-in model over the prediction protocol, on stdio or TCP.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "foresight/common/errors.h"
#include "foresight/models/server.h"
#include "foresight/models/transport.h"

namespace {

// Accepts the handshake, then fails every prediction.
class FailingServedModel : public foresight::ServedModel {
 public:
  std::string name() const override { return "failing"; }
  uint32_t max_batch() const override { return 64; }
  bool Supports(const foresight::protocol::Signature&) const override {
    return true;
  }
  foresight::PredictionResponse Predict(
      const foresight::PredictionRequest&) override {
    throw std::runtime_error("this model always fails");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prediction-protocol model server"};
  std::string transport = "stdio";
  std::string model_name = "persistence";
  uint32_t max_batch = 64;
  app.add_option("--transport", transport, "stdio or tcp:<port> (port 0 picks one)");
  app.add_option("--model", model_name, "persistence or failing");
  app.add_option("--max-batch", max_batch, "largest batch per PREDICT")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<foresight::ServedModel> model;
  if (model_name == "persistence") {
    model = std::make_unique<foresight::PersistenceServedModel>(max_batch);
  } else if (model_name == "failing") {
    model = std::make_unique<FailingServedModel>();
  } else {
    std::fprintf(stderr, "unknown model '%s'\n", model_name.c_str());
    return 2;
  }

  try {
    if (transport == "stdio") {
      foresight::FdTransport io(0, 1, false);
      foresight::Serve(io, *model);
      return 0;
    }
    if (transport.rfind("tcp:", 0) == 0) {
      const int port = std::stoi(transport.substr(4));
      foresight::TcpListener listener(static_cast<uint16_t>(port));
      std::printf("%u\n", unsigned(listener.port()));
      std::fflush(stdout);
      for (;;) {
        auto conn = listener.Accept(foresight::Milliseconds(24 * 3600 * 1000));
        foresight::Serve(*conn, *model);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "model server: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "unknown transport '%s'\n", transport.c_str());
  return 2;
}

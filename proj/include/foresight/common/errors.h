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

#ifndef FORESIGHT_COMMON_ERRORS_H_
#define FORESIGHT_COMMON_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace foresight {

// Base for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: shapes, non-finite values, out-of-range sizes.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or unknown configuration (categories, kinds, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Task-instance generation gave up after too many rejections.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class PlannerError : public Error {
 public:
  using Error::Error;
};

// Framing, magic, version or payload violations on the model wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Transport could not be established or timed out.
class ConnectionError : public Error {
 public:
  using Error::Error;
};

// The remote model answered with an ERROR message.
class RemoteModelError : public Error {
 public:
  RemoteModelError(uint32_t code, const std::string& message)
      : Error("remote model error " + std::to_string(code) + ": " + message),
        code_(code),
        server_message_(message) {}

  uint32_t code() const { return code_; }
  const std::string& server_message() const { return server_message_; }

 private:
  uint32_t code_;
  std::string server_message_;
};

// Rethrows the in-flight exception with `context` prepended to its message,
// keeping the error category. Call only from inside a catch block.
[[noreturn]] inline void RethrowWithContext(const std::string& context) {
  try {
    throw;
  } catch (const RemoteModelError& e) {
    throw RemoteModelError(e.code(), context + ": " + e.server_message());
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const PlannerError& e) {
    throw PlannerError(context + ": " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(context + ": " + e.what());
  } catch (const ConnectionError& e) {
    throw ConnectionError(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace foresight

#endif  // FORESIGHT_COMMON_ERRORS_H_

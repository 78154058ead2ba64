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

#ifndef FORESIGHT_MODELS_TRANSPORT_H_
#define FORESIGHT_MODELS_TRANSPORT_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "foresight/models/protocol.h"

namespace foresight {

using Milliseconds = std::chrono::milliseconds;
inline constexpr Milliseconds kDefaultTimeout{30000};

// Byte stream carrying protocol messages.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void WriteAll(std::span<const uint8_t> bytes) = 0;
  // Blocks until at least one byte is available, the timeout expires
  // (ConnectionError) or the peer closes the stream (returns 0).
  virtual size_t ReadSome(std::span<uint8_t> buffer, Milliseconds timeout) = 0;
};

// Reads from one descriptor and writes to another; used for pipes and
// sockets. Owned descriptors are closed on destruction.
class FdTransport : public Transport {
 public:
  FdTransport(int read_fd, int write_fd, bool owns_fds);
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void WriteAll(std::span<const uint8_t> bytes) override;
  size_t ReadSome(std::span<uint8_t> buffer, Milliseconds timeout) override;
  // Closes the write side so the peer sees end-of-stream.
  void CloseWrite();

 protected:
  int read_fd_;
  int write_fd_;
  bool owns_;
};

// Connects to "host:port". Throws ConnectionError when unreachable.
std::unique_ptr<FdTransport> ConnectTcp(const std::string& address,
                                        Milliseconds timeout = kDefaultTimeout);

// Listening socket on 127.0.0.1; port 0 picks an ephemeral port.
class TcpListener {
 public:
  explicit TcpListener(uint16_t port = 0);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  std::unique_ptr<FdTransport> Accept(Milliseconds timeout = kDefaultTimeout);

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// A model server spawned through /bin/sh speaking the protocol on its
// standard streams. On destruction stdin is closed, the child gets a grace
// period to exit, then SIGTERM and finally SIGKILL.
class SubprocessTransport : public FdTransport {
 public:
  static inline constexpr Milliseconds kGracePeriod{5000};

  explicit SubprocessTransport(const std::string& command);
  ~SubprocessTransport() override;

  pid_t pid() const { return pid_; }
  // Closes stdin and waits for exit; returns the exit status or -1.
  int Shutdown(Milliseconds grace = kGracePeriod);

 private:
  pid_t pid_ = -1;
  bool reaped_ = false;
  int status_ = -1;
};

// Connected pair of in-process transports (socketpair) for tests and the
// engine-side loopback server.
std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>>
MakeTransportPair();

void WriteMessage(Transport& transport, const protocol::Message& message);

// Returns nullopt on a clean end-of-stream between messages; throws
// ProtocolError on a stream that ends mid-message.
std::optional<protocol::Message> ReadMessage(Transport& transport,
                                             protocol::MessageParser& parser,
                                             Milliseconds timeout);

}  // namespace foresight

#endif  // FORESIGHT_MODELS_TRANSPORT_H_

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

#include "foresight/models/transport.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "foresight/common/errors.h"

namespace foresight {
namespace {

std::string Errno(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

void IgnoreSigpipe() {
  static const bool done = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

int WaitReadable(int fd, Milliseconds timeout) {
  pollfd p{fd, POLLIN, 0};
  for (;;) {
    const int rc = poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc < 0 && errno == EINTR) continue;
    return rc;
  }
}

}  // namespace

FdTransport::FdTransport(int read_fd, int write_fd, bool owns_fds)
    : read_fd_(read_fd), write_fd_(write_fd), owns_(owns_fds) {
  IgnoreSigpipe();
}

FdTransport::~FdTransport() {
  if (!owns_) return;
  if (read_fd_ >= 0) close(read_fd_);
  if (write_fd_ >= 0 && write_fd_ != read_fd_) close(write_fd_);
}

void FdTransport::CloseWrite() {
  if (write_fd_ < 0) return;
  if (write_fd_ == read_fd_) {
    shutdown(write_fd_, SHUT_WR);
  } else if (owns_) {
    close(write_fd_);
  }
  write_fd_ = -1;
}

void FdTransport::WriteAll(std::span<const uint8_t> bytes) {
  if (write_fd_ < 0) throw ConnectionError("transport write side is closed");
  size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t n = write(write_fd_, bytes.data() + off, bytes.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(Errno("transport write failed"));
    }
    off += static_cast<size_t>(n);
  }
}

size_t FdTransport::ReadSome(std::span<uint8_t> buffer, Milliseconds timeout) {
  const int rc = WaitReadable(read_fd_, timeout);
  if (rc == 0) throw ConnectionError("timed out waiting for the model");
  if (rc < 0) throw ConnectionError(Errno("poll failed"));
  for (;;) {
    const ssize_t n = read(read_fd_, buffer.data(), buffer.size());
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      if (errno == ECONNRESET) return 0;
      throw ConnectionError(Errno("transport read failed"));
    }
    return static_cast<size_t>(n);
  }
}

std::unique_ptr<FdTransport> ConnectTcp(const std::string& address,
                                        Milliseconds timeout) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    throw ConnectionError("model address must be host:port, got '" + address + "'");
  }
  const std::string host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || !res) {
    throw ConnectionError("cannot resolve " + address);
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      pollfd p{fd, POLLOUT, 0};
      rc = poll(&p, 1, static_cast<int>(timeout.count()));
      int err = 0;
      socklen_t len = sizeof(err);
      if (rc == 1) getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = (rc == 1 && err == 0) ? 0 : -1;
      if (err) errno = err;
      if (rc == 0) errno = 0;
    }
    if (rc == 0) {
      fcntl(fd, F_SETFL, flags);
      const int one = 1;
      setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      freeaddrinfo(res);
      return std::make_unique<FdTransport>(fd, fd, true);
    }
    last_error = errno ? std::strerror(errno) : "timed out";
    close(fd);
  }
  freeaddrinfo(res);
  throw ConnectionError("cannot connect to " + address + ": " + last_error);
}

TcpListener::TcpListener(uint16_t port) {
  IgnoreSigpipe();
  fd_ = socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw ConnectionError(Errno("socket"));
  const int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      listen(fd_, 4) < 0) {
    const std::string msg = Errno("bind/listen");
    close(fd_);
    throw ConnectionError(msg);
  }
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) close(fd_);
}

std::unique_ptr<FdTransport> TcpListener::Accept(Milliseconds timeout) {
  const int rc = WaitReadable(fd_, timeout);
  if (rc <= 0) throw ConnectionError("no connection within timeout");
  const int fd = accept(fd_, nullptr, nullptr);
  if (fd < 0) throw ConnectionError(Errno("accept"));
  return std::make_unique<FdTransport>(fd, fd, true);
}

SubprocessTransport::SubprocessTransport(const std::string& command)
    : FdTransport(-1, -1, true) {
  int to_child[2], from_child[2];
  if (pipe(to_child) < 0) throw ConnectionError(Errno("pipe"));
  if (pipe(from_child) < 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw ConnectionError(Errno("pipe"));
  }
  pid_ = fork();
  if (pid_ < 0) throw ConnectionError(Errno("fork"));
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  read_fd_ = from_child[0];
  write_fd_ = to_child[1];
}

int SubprocessTransport::Shutdown(Milliseconds grace) {
  if (reaped_) return status_;
  CloseWrite();
  const auto deadline = std::chrono::steady_clock::now() + grace;
  auto try_reap = [&] {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      reaped_ = true;
      status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      return true;
    }
    return false;
  };
  while (std::chrono::steady_clock::now() < deadline) {
    if (try_reap()) return status_;
    std::this_thread::sleep_for(Milliseconds(10));
  }
  kill(pid_, SIGTERM);
  for (int i = 0; i < 100; ++i) {
    if (try_reap()) return status_;
    std::this_thread::sleep_for(Milliseconds(10));
  }
  kill(pid_, SIGKILL);
  int status = 0;
  waitpid(pid_, &status, 0);
  reaped_ = true;
  status_ = -1;
  return status_;
}

SubprocessTransport::~SubprocessTransport() {
  if (pid_ > 0) Shutdown();
}

std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>>
MakeTransportPair() {
  IgnoreSigpipe();
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM, 0, fds) < 0) {
    throw ConnectionError(Errno("socketpair"));
  }
  return {std::make_unique<FdTransport>(fds[0], fds[0], true),
          std::make_unique<FdTransport>(fds[1], fds[1], true)};
}

void WriteMessage(Transport& transport, const protocol::Message& message) {
  transport.WriteAll(protocol::Encode(message));
}

std::optional<protocol::Message> ReadMessage(Transport& transport,
                                             protocol::MessageParser& parser,
                                             Milliseconds timeout) {
  std::vector<uint8_t> buf(1 << 16);
  for (;;) {
    if (auto m = parser.Next()) return m;
    const size_t n = transport.ReadSome(buf, timeout);
    if (n == 0) {
      if (parser.buffered() == 0) return std::nullopt;
      throw ProtocolError("stream ended in the middle of a message");
    }
    parser.Feed(std::span(buf.data(), n));
  }
}

}  // namespace foresight

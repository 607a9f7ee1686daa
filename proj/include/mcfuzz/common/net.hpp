// Copyright 2026 The mcfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal blocking TCP helpers with deadlines. All sockets are IPv4.

#ifndef MCFUZZ_COMMON_NET_HPP_
#define MCFUZZ_COMMON_NET_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "mcfuzz/common/bytes.hpp"

namespace mcfuzz {

using Clock = std::chrono::steady_clock;

struct Endpoint {
  std::string host = "127.0.0.1";
  uint16_t port = 0;

  // "host:port"; throws ConfigError on malformed input.
  static Endpoint Parse(const std::string& text);
  std::string ToString() const { return host + ":" + std::to_string(port); }
  bool operator==(const Endpoint&) const = default;
};

// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { Close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void Close();

 private:
  int fd_ = -1;
};

enum class IoStatus { kOk, kTimeout, kClosed, kError };

const char* IoStatusName(IoStatus s);

// Binds and listens; port 0 picks an ephemeral port. Throws ConfigError.
Socket ListenTcp(const Endpoint& at, int backlog = 8);
uint16_t LocalPort(const Socket& s);

// Returns an invalid socket on failure or timeout. Sets TCP_NODELAY.
Socket ConnectTcp(const Endpoint& to, std::chrono::milliseconds timeout);

// Accepts with a timeout; invalid socket on timeout or error.
Socket AcceptWithTimeout(const Socket& listener, std::chrono::milliseconds timeout);

IoStatus SendAll(int fd, ByteView data);
IoStatus RecvExact(int fd, uint8_t* buf, std::size_t n, Clock::time_point deadline);

// Waits until fd is readable. kOk when readable (or hung up).
IoStatus WaitReadable(int fd, Clock::time_point deadline);

// Length-prefixed message framing (u32 little-endian length, then bytes)
// used on the simulator's message transport.
inline constexpr std::size_t kMaxMessageFrame = 1 << 20;
IoStatus SendMessage(int fd, ByteView msg);
IoStatus RecvMessage(int fd, Bytes& out, Clock::time_point deadline);

// Picks a currently free TCP port on 127.0.0.1 by binding port 0.
uint16_t PickFreePort();

}  // namespace mcfuzz

#endif  // MCFUZZ_COMMON_NET_HPP_

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

#include "mcfuzz/common/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {
namespace {

sockaddr_in ToSockaddr(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw ConfigError("invalid IPv4 address '" + ep.host + "'");
  return addr;
}

int RemainingMs(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  if (left <= 0) return 0;
  return left > INT32_MAX ? INT32_MAX : static_cast<int>(left);
}

}  // namespace

Endpoint Endpoint::Parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw ConfigError("endpoint '" + text + "' is not host:port");
  Endpoint ep;
  ep.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  char* end = nullptr;
  const long v = std::strtol(port.c_str(), &end, 10);
  if (*end != '\0' || v < 0 || v > 65535) throw ConfigError("bad port in endpoint '" + text + "'");
  ep.port = static_cast<uint16_t>(v);
  return ep;
}

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    Close();
    fd_ = o.release();
  }
  return *this;
}

void Socket::Close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

const char* IoStatusName(IoStatus s) {
  switch (s) {
    case IoStatus::kOk: return "ok";
    case IoStatus::kTimeout: return "timeout";
    case IoStatus::kClosed: return "closed";
    case IoStatus::kError: return "error";
  }
  return "?";
}

Socket ListenTcp(const Endpoint& at, int backlog) {
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) throw ConfigError(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = ToSockaddr(at);
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw ConfigError("bind " + at.ToString() + ": " + std::strerror(errno));
  if (::listen(s.fd(), backlog) != 0)
    throw ConfigError("listen " + at.ToString() + ": " + std::strerror(errno));
  return s;
}

uint16_t LocalPort(const Socket& s) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) return 0;
  return ntohs(addr.sin_port);
}

Socket ConnectTcp(const Endpoint& to, std::chrono::milliseconds timeout) {
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!s.valid()) return {};
  sockaddr_in addr = ToSockaddr(to);
  int rc = ::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  if (rc != 0) {
    if (errno != EINPROGRESS) return {};
    pollfd pfd{s.fd(), POLLOUT, 0};
    if (::poll(&pfd, 1, static_cast<int>(timeout.count())) != 1) return {};
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) return {};
  }
  const int flags = ::fcntl(s.fd(), F_GETFL);
  ::fcntl(s.fd(), F_SETFL, flags & ~O_NONBLOCK);
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return s;
}

Socket AcceptWithTimeout(const Socket& listener, std::chrono::milliseconds timeout) {
  pollfd pfd{listener.fd(), POLLIN, 0};
  if (::poll(&pfd, 1, static_cast<int>(timeout.count())) != 1) return {};
  Socket s(::accept4(listener.fd(), nullptr, nullptr, SOCK_CLOEXEC));
  if (s.valid()) {
    int one = 1;
    ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  return s;
}

IoStatus SendAll(int fd, ByteView data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return (errno == EPIPE || errno == ECONNRESET) ? IoStatus::kClosed : IoStatus::kError;
    }
    off += static_cast<std::size_t>(n);
  }
  return IoStatus::kOk;
}

IoStatus WaitReadable(int fd, Clock::time_point deadline) {
  for (;;) {
    pollfd pfd{fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, RemainingMs(deadline));
    if (rc > 0) return IoStatus::kOk;
    if (rc == 0) return IoStatus::kTimeout;
    if (errno != EINTR) return IoStatus::kError;
  }
}

IoStatus RecvExact(int fd, uint8_t* buf, std::size_t n, Clock::time_point deadline) {
  std::size_t off = 0;
  while (off < n) {
    // Try the read first; poll only when the socket would block.
    const ssize_t r = ::recv(fd, buf + off, n - off, MSG_DONTWAIT);
    if (r > 0) {
      off += static_cast<std::size_t>(r);
      continue;
    }
    if (r == 0) return IoStatus::kClosed;
    if (errno == EINTR) continue;
    if (errno == ECONNRESET) return IoStatus::kClosed;
    if (errno != EAGAIN && errno != EWOULDBLOCK) return IoStatus::kError;
    const IoStatus w = WaitReadable(fd, deadline);
    if (w != IoStatus::kOk) return w;
  }
  return IoStatus::kOk;
}

IoStatus SendMessage(int fd, ByteView msg) {
  Bytes frame;
  frame.reserve(4 + msg.size());
  PutU32(frame, static_cast<uint32_t>(msg.size()));
  frame.insert(frame.end(), msg.begin(), msg.end());
  return SendAll(fd, frame);
}

IoStatus RecvMessage(int fd, Bytes& out, Clock::time_point deadline) {
  uint8_t hdr[4];
  IoStatus s = RecvExact(fd, hdr, 4, deadline);
  if (s != IoStatus::kOk) return s;
  const uint32_t len = GetU32(hdr);
  if (len > kMaxMessageFrame) return IoStatus::kError;
  out.resize(len);
  if (len == 0) return IoStatus::kOk;
  return RecvExact(fd, out.data(), len, deadline);
}

uint16_t PickFreePort() {
  Socket s = ListenTcp(Endpoint{"127.0.0.1", 0}, 1);
  return LocalPort(s);
}

}  // namespace mcfuzz

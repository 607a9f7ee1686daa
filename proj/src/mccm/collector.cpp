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

#include "mcfuzz/mccm/collector.hpp"

#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

#include <cstring>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::mccm {
namespace {

constexpr auto kFrameBodyTimeout = std::chrono::seconds(5);

}  // namespace

std::string ExitDescriptor::ToString() const {
  return (signaled ? "signal " : "exit ") + std::to_string(value);
}

Collector::Collector(CollectorOptions options) : options_(std::move(options)) {}

Collector::~Collector() { Stop(); }

void Collector::Start() {
  if (thread_.joinable()) return;
  listener_ = ListenTcp(options_.listen);
  port_ = LocalPort(listener_);
  if (::pipe2(wake_pipe_, O_CLOEXEC) != 0) throw ConfigError("pipe2 failed");
  stop_ = false;
  thread_ = std::thread([this] { Loop(); });
}

void Collector::Serve() {
  if (!listener_.valid()) {
    listener_ = ListenTcp(options_.listen);
    port_ = LocalPort(listener_);
  }
  if (wake_pipe_[0] < 0 && ::pipe2(wake_pipe_, O_CLOEXEC) != 0) throw ConfigError("pipe2 failed");
  Loop();
}

void Collector::Stop() {
  stop_ = true;
  if (wake_pipe_[1] >= 0) {
    const char b = 'x';
    [[maybe_unused]] ssize_t n = ::write(wake_pipe_[1], &b, 1);
  }
  if (thread_.joinable()) thread_.join();
  for (int& fd : wake_pipe_) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  listener_.Close();
}

bool Collector::EnsureRegion() {
  if (!region_) region_ = SharedRegion::Open(options_.region_name);
  return region_.has_value();
}

Frame Collector::Handle(const Frame& request) {
  if (!IsKnownType(request.type)) return MakeNack(NackCode::kUnknownType);
  switch (request.msg_type()) {
    case MsgType::kPing:
      return Frame(MsgType::kPong);
    case MsgType::kCollect: {
      if (!EnsureRegion()) return MakeNack(NackCode::kMissingRegion);
      const std::size_t size = region_->size();
      Bytes payload;
      payload.reserve(8 + size);
      PutU32(payload, options_.channel);
      PutU32(payload, static_cast<uint32_t>(size));
      payload.resize(8 + size);
      int retries = 0;
      std::span<uint8_t> cells(payload.data() + 8, size);
      region_->Snapshot(cells, &retries);
      retries_ += static_cast<uint64_t>(retries);
      ClassifyBuffer(cells);
      return Frame(MsgType::kCoverage, std::move(payload));
    }
    case MsgType::kReset:
      if (!EnsureRegion()) return MakeNack(NackCode::kMissingRegion);
      region_->Zero();
      return Frame(MsgType::kAck);
    case MsgType::kStatus: {
      StatusPayload p;
      p.channel = options_.channel;
      if (options_.status) {
        const ComponentStatus st = options_.status();
        p.alive = st.alive;
        p.restart_count = st.restart_count;
      } else {
        p.alive = EnsureRegion();
      }
      return Frame(MsgType::kStatusReply, EncodeStatus(p));
    }
    default:
      // Reply types and NACK are not valid requests.
      return MakeNack(NackCode::kUnknownType);
  }
}

void Collector::Loop() {
  while (!stop_) {
    pollfd pfds[2] = {{listener_.fd(), POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
    if (::poll(pfds, 2, -1) < 0) continue;
    if (stop_ || (pfds[1].revents & POLLIN)) break;
    Socket conn = AcceptWithTimeout(listener_, std::chrono::milliseconds(0));
    if (!conn.valid()) continue;
    while (!stop_) {
      pollfd cp[2] = {{conn.fd(), POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
      if (::poll(cp, 2, -1) < 0) continue;
      if (stop_ || (cp[1].revents & POLLIN)) return;
      Frame req;
      IoStatus st;
      try {
        st = RecvFrame(conn.fd(), req, Clock::now() + kFrameBodyTimeout);
      } catch (const ProtocolError&) {
        SendFrame(conn.fd(), MakeNack(NackCode::kBadRequest));
        break;
      }
      if (st != IoStatus::kOk) break;
      if (SendFrame(conn.fd(), Handle(req)) != IoStatus::kOk) break;
    }
  }
}

}  // namespace mcfuzz::mccm

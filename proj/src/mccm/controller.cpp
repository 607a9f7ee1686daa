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

#include "mcfuzz/mccm/controller.hpp"

#include <poll.h>
#include <sys/socket.h>

#include <algorithm>
#include <cerrno>
#include <set>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::mccm {

const char* CollectOutcomeName(CollectOutcome o) {
  switch (o) {
    case CollectOutcome::kOk: return "ok";
    case CollectOutcome::kMissing: return "missing";
    case CollectOutcome::kProtocolError: return "protocol-error";
  }
  return "?";
}

const char* CollectReasonName(CollectReason r) {
  switch (r) {
    case CollectReason::kMainNewBits: return "main-new-bits";
    case CollectReason::kCrash: return "crash";
    case CollectReason::kSweep: return "sweep";
    case CollectReason::kManual: return "manual";
  }
  return "?";
}

Controller::Controller(std::vector<CollectorEndpoint> endpoints)
    : endpoints_(std::move(endpoints)), links_(endpoints_.size()) {
  std::set<ChannelId> seen;
  for (const auto& ep : endpoints_) {
    if (!seen.insert(ep.channel).second)
      throw ConfigError("duplicate collector endpoint for channel " + std::to_string(ep.channel));
    if (ep.timeout_ms < 10)
      throw ConfigError("collector timeout for channel " + std::to_string(ep.channel) +
                        " must be >= 10 ms");
  }
}

bool Controller::EnsureConnected(std::size_t i) {
  Link& link = links_[i];
  if (link.sock.valid()) return true;
  link.buf.clear();
  link.sock = ConnectTcp(endpoints_[i].address, std::chrono::milliseconds(endpoints_[i].timeout_ms));
  return link.sock.valid();
}

std::vector<ChannelSnapshot> Controller::Collect(CollectRequest request) {
  if (keep_log_) log_.push_back(request);
  ++counts_[static_cast<int>(request.reason)];

  const std::size_t n = endpoints_.size();
  std::vector<ChannelSnapshot> out(n);
  std::vector<bool> pending(n, false);
  std::vector<Clock::time_point> deadline(n);
  const Bytes collect = EncodeFrame(Frame(MsgType::kCollect));

  for (std::size_t i = 0; i < n; ++i) {
    out[i].channel = endpoints_[i].channel;
    const std::string who = "collector " + endpoints_[i].address.ToString() + " (channel " +
                            std::to_string(endpoints_[i].channel) + ")";
    bool sent = false;
    // A kept-alive connection may have been dropped by the peer; retry once.
    for (int attempt = 0; attempt < 2 && !sent; ++attempt) {
      if (!EnsureConnected(i)) break;
      if (SendAll(links_[i].sock.fd(), collect) == IoStatus::kOk)
        sent = true;
      else
        links_[i].sock.Close();
    }
    if (!sent) {
      out[i].error = who + " unreachable";
      continue;
    }
    links_[i].buf.clear();
    pending[i] = true;
    deadline[i] = Clock::now() + std::chrono::milliseconds(endpoints_[i].timeout_ms);
  }

  auto fail = [&](std::size_t i, CollectOutcome outcome, const std::string& why) {
    out[i].outcome = outcome;
    out[i].error = "collector " + endpoints_[i].address.ToString() + " (channel " +
                   std::to_string(endpoints_[i].channel) + "): " + why;
    out[i].map.reset();
    links_[i].sock.Close();
    pending[i] = false;
  };

  std::vector<pollfd> pfds;
  std::vector<std::size_t> index;
  uint8_t chunk[65536];
  for (;;) {
    pfds.clear();
    index.clear();
    auto soonest = Clock::time_point::max();
    const auto now = Clock::now();
    for (std::size_t i = 0; i < n; ++i) {
      if (!pending[i]) continue;
      if (now >= deadline[i]) {
        fail(i, CollectOutcome::kMissing, "timed out");
        continue;
      }
      pfds.push_back({links_[i].sock.fd(), POLLIN, 0});
      index.push_back(i);
      soonest = std::min(soonest, deadline[i]);
    }
    if (pfds.empty()) break;
    const auto wait_ms = std::max<int64_t>(
        0, std::chrono::duration_cast<std::chrono::milliseconds>(soonest - now).count() + 1);
    const int rc = ::poll(pfds.data(), pfds.size(), static_cast<int>(wait_ms));
    if (rc < 0 && errno != EINTR) {
      for (std::size_t i : index) fail(i, CollectOutcome::kMissing, "poll failed");
      break;
    }
    for (std::size_t k = 0; k < pfds.size(); ++k) {
      if (pfds[k].revents == 0) continue;
      const std::size_t i = index[k];
      Link& link = links_[i];
      const ssize_t r = ::recv(link.sock.fd(), chunk, sizeof(chunk), MSG_DONTWAIT);
      if (r == 0 || (r < 0 && errno != EAGAIN && errno != EINTR)) {
        fail(i, CollectOutcome::kMissing, "connection closed");
        continue;
      }
      if (r < 0) continue;
      link.buf.insert(link.buf.end(), chunk, chunk + r);
      std::size_t used = 0;
      std::optional<Frame> frame;
      try {
        frame = DecodeFrame(link.buf, &used);
      } catch (const ProtocolError& e) {
        fail(i, CollectOutcome::kProtocolError, e.what());
        continue;
      }
      if (!frame) continue;
      link.buf.erase(link.buf.begin(), link.buf.begin() + static_cast<std::ptrdiff_t>(used));
      pending[i] = false;
      if (frame->type == static_cast<uint8_t>(MsgType::kNack)) {
        const int code = frame->payload.empty() ? -1 : frame->payload[0];
        fail(i, CollectOutcome::kMissing, "NACK code " + std::to_string(code));
        continue;
      }
      if (frame->type != static_cast<uint8_t>(MsgType::kCoverage)) {
        fail(i, CollectOutcome::kProtocolError,
             "unexpected reply type " + std::to_string(frame->type));
        continue;
      }
      try {
        CoveragePayload p = DecodeCoverage(frame->payload);
        if (p.channel != endpoints_[i].channel)
          throw ProtocolError("reply for channel " + std::to_string(p.channel));
        out[i].map = CoverageMap::FromClassified(p.channel, p.buckets);
        out[i].outcome = CollectOutcome::kOk;
      } catch (const std::exception& e) {
        fail(i, CollectOutcome::kProtocolError, e.what());
      }
    }
  }
  for (const auto& s : out) missing_total_ += s.outcome != CollectOutcome::kOk;
  return out;
}

std::optional<Frame> Controller::Exchange(ChannelId channel, const Frame& request) {
  const auto it = std::find_if(endpoints_.begin(), endpoints_.end(),
                               [&](const auto& ep) { return ep.channel == channel; });
  if (it == endpoints_.end()) throw ConfigError("no collector for channel " + std::to_string(channel));
  const auto i = static_cast<std::size_t>(it - endpoints_.begin());
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (!EnsureConnected(i)) return std::nullopt;
    if (SendFrame(links_[i].sock.fd(), request) != IoStatus::kOk) {
      links_[i].sock.Close();
      continue;
    }
    Frame reply;
    IoStatus st;
    try {
      st = RecvFrame(links_[i].sock.fd(), reply,
                     Clock::now() + std::chrono::milliseconds(it->timeout_ms));
    } catch (const ProtocolError& e) {
      links_[i].sock.Close();
      throw ProtocolError("collector " + it->address.ToString() + ": " + e.what());
    }
    if (st == IoStatus::kOk) return reply;
    links_[i].sock.Close();
    if (st == IoStatus::kTimeout) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace mcfuzz::mccm

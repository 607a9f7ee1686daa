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

// Controller: fans COLLECT requests out to every collector concurrently and
// joins the replies. A channel that times out or misbehaves is reported as
// missing; no zero map is ever fabricated for it.

#ifndef MCFUZZ_MCCM_CONTROLLER_HPP_
#define MCFUZZ_MCCM_CONTROLLER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcfuzz/common/net.hpp"
#include "mcfuzz/coverage/coverage.hpp"
#include "mcfuzz/mccm/frame.hpp"

namespace mcfuzz::mccm {

struct CollectorEndpoint {
  ChannelId channel = 0;
  Endpoint address;
  std::string region_name;
  int timeout_ms = 500;
};

enum class CollectOutcome { kOk, kMissing, kProtocolError };
const char* CollectOutcomeName(CollectOutcome o);

struct ChannelSnapshot {
  ChannelId channel = 0;
  CollectOutcome outcome = CollectOutcome::kMissing;
  std::optional<CoverageMap> map;  // classified; set only when outcome == kOk
  std::string error;
};

enum class CollectReason : uint8_t { kMainNewBits, kCrash, kSweep, kManual };
const char* CollectReasonName(CollectReason r);

struct CollectRequest {
  uint64_t exec_index = 0;
  CollectReason reason = CollectReason::kManual;
};

class Controller {
 public:
  // Throws ConfigError on duplicate channel ids or timeout_ms < 10.
  explicit Controller(std::vector<CollectorEndpoint> endpoints);

  std::vector<ChannelSnapshot> Collect(CollectRequest request = {});

  // Single request/response exchange with one collector (PING, RESET,
  // STATUS). nullopt on timeout or transport failure.
  std::optional<Frame> Exchange(ChannelId channel, const Frame& request);

  const std::vector<CollectorEndpoint>& endpoints() const { return endpoints_; }

  // Every Collect() call in order, when logging is enabled.
  void set_keep_log(bool keep) { keep_log_ = keep; }
  const std::vector<CollectRequest>& request_log() const { return log_; }
  uint64_t requests(CollectReason r) const { return counts_[static_cast<int>(r)]; }
  uint64_t missing_total() const { return missing_total_; }

 private:
  struct Link {
    Socket sock;
    Bytes buf;
  };
  bool EnsureConnected(std::size_t i);

  std::vector<CollectorEndpoint> endpoints_;
  std::vector<Link> links_;
  bool keep_log_ = false;
  std::vector<CollectRequest> log_;
  uint64_t counts_[4] = {0, 0, 0, 0};
  uint64_t missing_total_ = 0;
};

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_CONTROLLER_HPP_

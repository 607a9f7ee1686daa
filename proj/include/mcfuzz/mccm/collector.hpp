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

// Collector: serves one component's shared coverage region over the MCCM
// frame protocol. Handles one connection and one request at a time.

#ifndef MCFUZZ_MCCM_COLLECTOR_HPP_
#define MCFUZZ_MCCM_COLLECTOR_HPP_

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "mcfuzz/common/net.hpp"
#include "mcfuzz/mccm/component_status.hpp"
#include "mcfuzz/mccm/frame.hpp"
#include "mcfuzz/mccm/shared_region.hpp"

namespace mcfuzz::mccm {

struct CollectorOptions {
  std::string region_name;
  ChannelId channel = 0;
  Endpoint listen{"127.0.0.1", 0};
  // Supplies STATUS replies; without it the collector reports alive=true
  // whenever the region exists.
  std::function<ComponentStatus()> status;
};

class Collector {
 public:
  explicit Collector(CollectorOptions options);
  ~Collector();
  Collector(const Collector&) = delete;
  Collector& operator=(const Collector&) = delete;

  // Binds the listening socket and starts the service thread.
  void Start();
  void Stop();

  // Blocks serving requests until Stop() (used by the standalone CLI).
  void Serve();

  Endpoint endpoint() const { return {options_.listen.host, port_}; }

  // Builds the reply for one request. Exposed for tests.
  Frame Handle(const Frame& request);

  uint64_t snapshot_retries() const { return retries_.load(); }

 private:
  void Loop();
  bool EnsureRegion();

  CollectorOptions options_;
  Socket listener_;
  uint16_t port_ = 0;
  std::optional<SharedRegion> region_;
  Bytes scratch_;
  std::thread thread_;
  std::atomic<bool> stop_{false};
  std::atomic<uint64_t> retries_{0};
  int wake_pipe_[2] = {-1, -1};
};

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_COLLECTOR_HPP_

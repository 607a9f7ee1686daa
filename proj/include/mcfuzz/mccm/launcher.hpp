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

// Launcher: creates each component's shared coverage region, starts the
// component process and its collector, and watches process liveness.
//
// The monitor thread polls every poll_interval. An abnormal exit (signal,
// exit code >= 128, or kCrashExitCode) becomes a crash event attributed to
// the test case in flight, or to the previous test case when none is in
// flight. Every exited component is restarted. Restarts that do not follow a
// crash attributed to a test case count toward the restart-storm limit.

#ifndef MCFUZZ_MCCM_LAUNCHER_HPP_
#define MCFUZZ_MCCM_LAUNCHER_HPP_

#include <sys/types.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mcfuzz/mccm/collector.hpp"
#include "mcfuzz/mccm/component_status.hpp"
#include "mcfuzz/mccm/controller.hpp"
#include "mcfuzz/mccm/shared_region.hpp"

namespace mcfuzz::mccm {

struct LaunchSpec {
  ChannelId channel = 0;
  std::string name;
  std::string executable;
  std::vector<std::string> args;  // argv[1..]
  std::vector<std::pair<std::string, std::string>> env;  // added to the inherited environment
  std::string region_name;  // empty: derived from the launcher prefix
  std::size_t map_size = kDefaultMapSize;
  uint16_t listen_port = 0;  // 0: no readiness probe (MCCM_LISTEN unset)
  bool start_collector = true;
  int collector_timeout_ms = 500;
  std::string output_path;  // appends stdout/stderr here; empty: inherited
};

struct ComponentEvent {
  ChannelId channel = 0;
  pid_t pid = -1;
  ExitDescriptor exit;
  bool crash = false;
  std::optional<uint64_t> testcase;  // attributed test case, if any
};

struct LauncherOptions {
  int poll_interval_ms = 50;
  int restart_timeout_ms = 2000;
  int storm_limit = 10;
  double storm_window_s = 60.0;
  std::string region_prefix;  // default: "/mcfuzz-<pid>"
};

class Launcher {
 public:
  explicit Launcher(LauncherOptions options = {});
  ~Launcher();
  Launcher(const Launcher&) = delete;
  Launcher& operator=(const Launcher&) = delete;

  // Creates the region, starts the process (environment MCCM_REGION,
  // MCCM_LISTEN, MCCM_CHANNEL) and its collector, then waits up to
  // restart_timeout for the listen port to accept connections. A process
  // that exits first yields alive=false with last_exit set. Throws
  // TargetError if the process cannot be created.
  ComponentStatus Spawn(const LaunchSpec& spec);

  void StartMonitor();
  void StopMonitor();

  // Marks the test case window used for crash attribution.
  void BeginTestCase(uint64_t id);
  void EndTestCase();

  std::vector<ComponentEvent> DrainEvents();

  // Wakes the monitor and waits until the component's restart count exceeds
  // `seen_restarts` and it is alive again.
  bool AwaitRestart(ChannelId channel, uint32_t seen_restarts, std::chrono::milliseconds timeout);

  ComponentStatus Status(ChannelId channel) const;
  std::vector<ChannelId> channels() const;
  SharedRegion& region(ChannelId channel);
  CollectorEndpoint collector_endpoint(ChannelId channel) const;
  // Kills the process with SIGKILL; the monitor notices and restarts it.
  void Kill(ChannelId channel);

  bool storm() const { return storm_.load(); }
  std::string storm_diagnostics() const;

  double Elapsed() const;

 private:
  struct Component {
    LaunchSpec spec;
    std::unique_ptr<SharedRegion> region;
    std::unique_ptr<Collector> collector;
    ComponentStatus status;
  };

  pid_t StartProcess(const Component& c);
  bool WaitReady(Component& c);
  void PollOnce(bool restart);
  void MonitorLoop();

  LauncherOptions options_;
  Clock::time_point start_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<ChannelId, Component> components_;
  std::deque<ComponentEvent> events_;
  std::deque<double> restart_times_;
  std::vector<std::string> storm_log_;
  std::atomic<bool> storm_{false};
  std::atomic<int64_t> in_flight_{-1};
  std::atomic<int64_t> last_testcase_{-1};
  std::thread monitor_;
  bool stop_ = false;
  bool kicked_ = false;
};

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_LAUNCHER_HPP_

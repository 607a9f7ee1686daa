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

// The system under test as seen by the campaign: launches the entry and
// downstream components, keeps the message connection to the entry, and
// executes one message sequence at a time with coverage and crash feedback.

#ifndef MCFUZZ_FUZZCORE_TARGET_HPP_
#define MCFUZZ_FUZZCORE_TARGET_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcfuzz/common/net.hpp"
#include "mcfuzz/coverage/coverage.hpp"
#include "mcfuzz/fuzzcore/config.hpp"
#include "mcfuzz/mccm/controller.hpp"
#include "mcfuzz/mccm/launcher.hpp"
#include "mcfuzz/mutation/message_sequence.hpp"
#include "mcfuzz/scoring/scoring.hpp"

namespace mcfuzz {

// Which channels an execution may collect.
enum class CollectPolicy {
  kGated,  // multi mode: main new bits, crash or sweep; main-only: never
  kAll,    // every channel, every time (calibration, replay)
};

struct CrashObservation {
  ChannelId channel = 0;
  std::string component;
  uint32_t site_id = 0;  // 0 when no crash line could be matched
  uint64_t testcase = 0;
  mccm::ExitDescriptor exit;
};

struct ExecResult {
  uint64_t testcase = 0;
  ExecutionRecord record;
  std::vector<bool> collected;  // per channel
  std::vector<ChannelId> novel_channels;
  std::vector<std::optional<uint8_t>> statuses;  // reply status per message
  std::vector<CrashObservation> crashes;
  std::optional<mccm::CollectReason> collect_reason;
  std::size_t missing_channels = 0;
  bool hang = false;
  bool invalid = false;  // transport failure without a crash; not scored
  std::string note;

  bool novel() const { return !novel_channels.empty(); }
};

class Target {
 public:
  // Launches every component and waits until they accept connections.
  // Throws TargetError when a component cannot be started.
  explicit Target(const CampaignConfig& config);
  ~Target();
  Target(const Target&) = delete;
  Target& operator=(const Target&) = delete;

  ExecResult Execute(const MessageSequence& seq, CollectPolicy policy = CollectPolicy::kGated);

  std::size_t channel_count() const { return virgins_.size(); }
  const std::string& channel_name(ChannelId ch) const { return names_.at(ch); }
  const VirginState& virgin(ChannelId ch) const { return virgins_.at(ch); }
  uint64_t executions() const { return next_testcase_ - 1; }
  uint64_t collections(mccm::CollectReason r) const { return controller_->requests(r); }
  uint64_t missing_total() const { return controller_->missing_total(); }
  uint32_t restarts() const;
  mccm::Launcher& launcher() { return *launcher_; }
  mccm::Controller& controller() { return *controller_; }
  // Elapsed seconds since the target came up.
  double Elapsed() const { return launcher_->Elapsed(); }

 private:
  bool Connect();
  std::vector<CrashObservation> DrainCrashes();
  uint32_t LookupSite(ChannelId ch, uint64_t token, std::string* component);

  CampaignConfig config_;
  std::unique_ptr<mccm::Launcher> launcher_;
  std::unique_ptr<mccm::Controller> controller_;
  std::vector<std::string> names_;
  std::vector<mccm::SharedRegion*> regions_;
  std::vector<VirginState> virgins_;
  std::vector<std::filesystem::path> crash_logs_;
  std::vector<uint64_t> crash_log_offsets_;
  std::vector<uint32_t> seen_restarts_;
  CoverageMap main_map_;
  Endpoint entry_;
  Socket conn_;
  uint64_t next_testcase_ = 1;
};

// Path of the component executable: the configured one, or mcfuzz-sut in
// the directory of the running executable.
std::filesystem::path ResolveSutBinary(const CampaignConfig& config);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_TARGET_HPP_

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

// The fuzzing campaign: seed scheduling, energy assignment, mutation,
// execution, admission, crash triage and statistics.

#ifndef MCFUZZ_FUZZCORE_CAMPAIGN_HPP_
#define MCFUZZ_FUZZCORE_CAMPAIGN_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcfuzz/fuzzcore/config.hpp"
#include "mcfuzz/fuzzcore/stats.hpp"
#include "mcfuzz/fuzzcore/target.hpp"
#include "mcfuzz/fuzzcore/triage.hpp"
#include "mcfuzz/mutation/message_sequence.hpp"
#include "mcfuzz/mutation/mutator.hpp"
#include "mcfuzz/scoring/scheduler.hpp"
#include "mcfuzz/scoring/scoring.hpp"

namespace mcfuzz {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTarget = 3;
inline constexpr int kExitStorm = 4;

struct Seed {
  uint64_t id = 0;
  MessageSequence sequence;
  ExecutionRecord exec_record;
  ScoreBreakdown score;
  uint32_t energy = 0;
  // Set on admission; afterwards true iff the seed's last fuzzing visit
  // admitted at least one mutant.
  bool favored = true;
  double discovered_at = 0.0;
  std::optional<uint64_t> parent_id;
  uint64_t testcase = 0;
  std::vector<ChannelId> novel_channels;
};

// The initial corpus: every *.mcsq file in corpus_dir in name order, or the
// built-in seeds when corpus_dir is unset.
std::vector<MessageSequence> LoadInitialCorpus(const CampaignConfig& config);

struct CampaignResult {
  int exit_code = kExitOk;
  std::string message;
  uint64_t execs = 0;
  uint64_t messages = 0;  // messages sent across all executions
  double elapsed_s = 0.0;
  std::size_t corpus = 0;
  std::vector<std::size_t> edges;  // per channel
  std::vector<CrashRecord> crashes;
};

class Campaign {
 public:
  // Finalizes the config; throws ConfigError.
  explicit Campaign(CampaignConfig config, const std::atomic<bool>* stop = nullptr);

  // Runs to completion. Throws ConfigError, TargetError or
  // RestartStormError; RunCampaign() maps them to exit codes.
  CampaignResult Run();

  const CampaignConfig& config() const { return config_; }
  const std::vector<Seed>& queue() const { return queue_; }

 private:
  bool Done() const;
  double Now() const;
  void Calibrate();
  void FuzzOne();
  void Handle(const ExecResult& r, const MessageSequence& seq, std::optional<uint64_t> parent,
              bool initial);
  void Admit(const ExecResult& r, const MessageSequence& seq, std::optional<uint64_t> parent,
             bool initial);
  void RefreshEnergy();
  void MaybeEmitStats(bool final_row);
  void WriteSummary(const CampaignResult& result) const;

  CampaignConfig config_;
  const std::atomic<bool>* stop_;
  ScoreWeights weights_;
  EnergyPolicy energy_;
  std::unique_ptr<Target> target_;
  Mutator mutator_;
  SeedScheduler scheduler_;
  Rng schedule_rng_;
  std::unique_ptr<StatsWriter> stats_;
  std::unique_ptr<CrashTable> crashes_;
  std::ofstream admissions_;
  std::vector<Seed> queue_;
  Clock::time_point start_;

  uint64_t execs_ = 0;
  uint64_t messages_ = 0;
  uint64_t invalid_ = 0;
  uint64_t hangs_ = 0;
  uint64_t visits_ = 0;
  uint64_t unspent_energy_ = 0;
  uint64_t last_testcase_ = 0;
  MessageSequence last_sequence_;

  double last_row_t_ = 0.0;
  uint64_t last_row_execs_ = 0;
  std::vector<std::size_t> last_row_edges_;
};

// Runs a campaign and maps failures to exit codes, printing diagnostics to
// stderr.
CampaignResult RunCampaign(const CampaignConfig& config, const std::atomic<bool>* stop = nullptr);

struct ReplayReport {
  ExecResult exec;
  std::vector<std::size_t> edges_before;  // covered edges per channel
  std::vector<std::size_t> edges_after;
};

// Executes `seq` once with every channel collected.
ReplayReport ReplayOnce(Target& target, const MessageSequence& seq);
std::string FormatReplay(const Target& target, const MessageSequence& seq, const ReplayReport& r);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_CAMPAIGN_HPP_

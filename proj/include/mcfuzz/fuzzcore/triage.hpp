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

// Crash deduplication by (channel, crash site). The live table writes one
// witness sequence per distinct crash and an append-only event log;
// TriageDirectory() rebuilds the table offline from a crash directory.

#ifndef MCFUZZ_FUZZCORE_TRIAGE_HPP_
#define MCFUZZ_FUZZCORE_TRIAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mcfuzz/coverage/coverage.hpp"
#include "mcfuzz/mutation/message_sequence.hpp"

namespace mcfuzz {

struct CrashRecord {
  ChannelId channel = 0;
  std::string component;
  uint32_t site_id = 0;
  double first_seen_s = 0.0;
  uint64_t first_testcase = 0;
  uint64_t count = 0;
  std::filesystem::path witness;
};

// "D1".."D3" for the simulator's planted defect sites, "" otherwise.
std::string DefectLabel(uint32_t site_id);

class CrashTable {
 public:
  // An empty crash_dir keeps everything in memory.
  explicit CrashTable(std::filesystem::path crash_dir = {});

  // Returns true when (channel, site_id) had not been seen before; the
  // witness is written only then.
  bool Add(ChannelId channel, const std::string& component, uint32_t site_id, uint64_t testcase,
           double at_s, const MessageSequence& witness);

  std::size_t unique() const { return records_.size(); }
  uint64_t total() const { return total_; }
  // Ordered by first discovery.
  std::vector<CrashRecord> records() const;
  const CrashRecord* Find(ChannelId channel, uint32_t site_id) const;

 private:
  std::filesystem::path dir_;
  std::map<std::pair<ChannelId, uint32_t>, CrashRecord> records_;
  uint64_t total_ = 0;
};

struct TriageReport {
  std::vector<CrashRecord> records;  // ordered by first discovery
  std::vector<std::string> warnings;
};

// Reads crash-*.log files (one "CRASH <component> <site> <token>" line per
// crash) and events.tsv from a crash directory. Malformed lines produce a
// warning and are skipped. Throws ConfigError if the directory is missing.
TriageReport TriageDirectory(const std::filesystem::path& crash_dir);

std::string FormatTriageTable(const std::vector<CrashRecord>& records);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_TRIAGE_HPP_

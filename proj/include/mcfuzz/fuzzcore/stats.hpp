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

// Campaign statistics: an append-only CSV with the columns
//   elapsed_s, execs, execs_per_s, edges_ch0..edges_chN, rate_ch0..rate_chN,
//   corpus, unique_crashes, total_crashes
// plus the readers used by `stats summarize` and the integrity checks.

#ifndef MCFUZZ_FUZZCORE_STATS_HPP_
#define MCFUZZ_FUZZCORE_STATS_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace mcfuzz {

struct StatsRow {
  double elapsed_s = 0.0;
  uint64_t execs = 0;
  double execs_per_s = 0.0;
  std::vector<uint64_t> edges;  // covered edges per channel
  std::vector<double> rates;    // newly covered edges per second since the previous row
  uint64_t corpus = 0;
  uint64_t unique_crashes = 0;
  uint64_t total_crashes = 0;
};

std::vector<std::string> StatsColumns(std::size_t channels);

class StatsWriter {
 public:
  // Truncates the file and writes the header. Throws TargetError when the
  // file cannot be written.
  StatsWriter(const std::filesystem::path& path, std::size_t channels);
  void Append(const StatsRow& row);
  std::size_t rows() const { return rows_; }

 private:
  std::filesystem::path path_;
  std::size_t channels_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

struct StatsTable {
  std::filesystem::path source;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

// Throws ConfigError on an unreadable or malformed file.
StatsTable ReadStatsCsv(const std::filesystem::path& path);

// Violations of: elapsed_s and execs strictly increasing; edges_*, corpus
// and crash counts nondecreasing; unique_crashes <= total_crashes. Empty
// when the table is consistent.
std::vector<std::string> CheckStatsInvariants(const StatsTable& table);

struct SummaryBucket {
  double t = 0.0;  // bucket time in seconds
  std::size_t runs = 0;
  std::vector<double> mean, min, max;  // per summarized column
};

struct StatsSummary {
  std::vector<std::string> columns;  // every input column except elapsed_s
  std::vector<SummaryBucket> buckets;
};

// Aligns rows of several runs on a common time grid (row time rounded to
// the nearest multiple of bucket_s; the last row wins within a bucket) and
// reports mean, min and max across runs per bucket. Throws ConfigError if
// the runs have different columns.
StatsSummary Summarize(const std::vector<StatsTable>& runs, double bucket_s);
void WriteSummaryCsv(const StatsSummary& summary, std::ostream& out);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_STATS_HPP_

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

// Campaign configuration: a flat key=value file. Blank lines and lines
// starting with '#' are ignored. Relative paths are resolved against the
// directory holding the config file.

#ifndef MCFUZZ_FUZZCORE_CONFIG_HPP_
#define MCFUZZ_FUZZCORE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mcfuzz/scoring/scoring.hpp"
#include "mcfuzz/sutsim/components.hpp"

namespace mcfuzz {

enum class CampaignMode { kMulti, kMainOnly };
enum class TimingMode { kWall, kNominal };

const char* ModeName(CampaignMode m);
CampaignMode ParseMode(const std::string& text);

struct CampaignConfig {
  CampaignMode mode = CampaignMode::kMulti;
  double budget_s = 600.0;
  uint64_t exec_budget = 0;  // 0: no execution limit
  uint64_t rng_seed = 1;
  TimingMode timing = TimingMode::kWall;

  // Target.
  std::filesystem::path sut_binary;  // empty: mcfuzz-sut next to this executable
  std::vector<sutsim::Role> downstreams = {sutsim::Role::kSmf, sutsim::Role::kNrf,
                                           sutsim::Role::kUpf};
  sutsim::DefectSet defects;
  std::size_t map_size = kDefaultMapSize;
  int downstream_deadline_ms = 100;

  // Collection.
  uint64_t sweep_interval = 100;  // K; 0 disables the periodic sweep
  int settle_ms = 20;
  int message_timeout_ms = 200;
  int collector_timeout_ms = 500;

  // Scoring and scheduling.
  double w1 = 0.7;
  double w2 = 0.3;
  double beta = 0.1;
  std::vector<double> alphas;  // empty: 0.4 main, 0.6 shared by the rest
  uint32_t e_min = 16;
  uint32_t e_max = 1024;
  double reference_quantile = 0.95;
  double time_floor_s = kDefaultTimeFloorS;
  double p_skip = 0.75;
  uint32_t max_stack = 4;
  double splice_probability = 0.2;

  // Launcher.
  int poll_interval_ms = 50;
  int restart_timeout_ms = 2000;
  int storm_limit = 10;
  double storm_window_s = 60.0;

  // Files.
  std::filesystem::path corpus_dir;  // empty: built-in seeds
  std::filesystem::path output_dir = "mcfuzz-out";
  std::filesystem::path crash_dir;   // empty: <output_dir>/crashes
  std::filesystem::path queue_dir;   // empty: <output_dir>/queue
  std::filesystem::path stats_file;  // empty: <output_dir>/stats.csv
  double stats_interval_s = 5.0;

  std::size_t channel_count() const { return 1 + downstreams.size(); }
  ScoreWeights weights() const;
  EnergyPolicy energy_policy() const;
  // Main-only mode zeroes every non-main alpha and disables the sweep.
  void ApplyMode(CampaignMode m);
  // Fills derived paths. Throws ConfigError on invalid combinations.
  void Finalize();
};

// Sets one key from its text form. Throws ConfigError on unknown keys or
// unparsable values. `base` resolves relative paths.
void SetConfigValue(CampaignConfig& config, const std::string& key, const std::string& value,
                    const std::filesystem::path& base = {});

CampaignConfig ParseConfigText(const std::string& text, const std::filesystem::path& base = {});
CampaignConfig LoadConfigFile(const std::filesystem::path& path);

struct ConfigKeyDoc {
  const char* key;
  const char* default_value;
  const char* help;
};
std::span<const ConfigKeyDoc> ConfigKeyDocs();

// Renders every key with its current value, in documentation order.
std::string DumpConfig(const CampaignConfig& config);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_CONFIG_HPP_

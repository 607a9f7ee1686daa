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

// Dual-reward test case scoring and score-to-energy mapping.
//
//   S  = w1 * Rc + w2 * Re
//   Rc = sum_i alpha_i * C_i
//   Re = beta * (1 / T) * sum_i C_i
//
// where C_i is the normalized coverage gain on channel i and T the
// execution time in seconds.

#ifndef MCFUZZ_SCORING_SCORING_HPP_
#define MCFUZZ_SCORING_SCORING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mcfuzz/coverage/coverage.hpp"

namespace mcfuzz {

inline constexpr double kDefaultTimeFloorS = 1e-3;
inline constexpr double kReferenceScoreFloor = 1e-6;

struct ScoreWeights {
  double w1 = 0.7;
  double w2 = 0.3;
  double beta = 0.1;
  std::vector<double> alphas;

  // alpha_main = 0.4, remaining 0.6 split evenly (1.0 for a single channel).
  static ScoreWeights Defaults(std::size_t channels);

  // Throws ConfigError on negative weights, w1 = w2 = 0, or all alphas 0.
  void Validate() const;
};

struct ScoreBreakdown {
  double rc = 0.0;
  double re = 0.0;
  double s = 0.0;
};

struct ExecutionRecord {
  std::vector<ChannelGain> gains;  // one per channel, indexed by channel id
  double exec_time_s = kDefaultTimeFloorS;
};

struct EnergyPolicy {
  uint32_t e_min = 16;
  uint32_t e_max = 1024;
  double s_ref = kReferenceScoreFloor;

  void Validate() const;
};

double CoverageReward(std::span<const double> gains, const ScoreWeights& weights);
double CoverageReward(std::span<const ChannelGain> gains, const ScoreWeights& weights);

// Execution times below time_floor_s (including nonpositive ones) are
// clamped to the floor.
double EfficiencyReward(const ExecutionRecord& record, const ScoreWeights& weights,
                        double time_floor_s = kDefaultTimeFloorS);

ScoreBreakdown Score(const ExecutionRecord& record, const ScoreWeights& weights,
                     double time_floor_s = kDefaultTimeFloorS);

// round(e_min + (e_max - e_min) * min(s / s_ref, 1)).
uint32_t AssignEnergy(double s, const EnergyPolicy& policy);

// Nearest-rank quantile of the given scores, never below
// kReferenceScoreFloor. Returns the floor for an empty list.
double ReferenceScore(std::span<const double> scores, double quantile = 0.95);

}  // namespace mcfuzz

#endif  // MCFUZZ_SCORING_SCORING_HPP_

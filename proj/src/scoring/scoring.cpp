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

#include "mcfuzz/scoring/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {

ScoreWeights ScoreWeights::Defaults(std::size_t channels) {
  ScoreWeights w;
  if (channels == 0) return w;
  if (channels == 1) {
    w.alphas = {1.0};
    return w;
  }
  w.alphas.assign(channels, 0.6 / static_cast<double>(channels - 1));
  w.alphas[0] = 0.4;
  return w;
}

void ScoreWeights::Validate() const {
  if (w1 < 0 || w2 < 0 || beta < 0)
    throw ConfigError("score weights w1, w2 and beta must be nonnegative");
  if (w1 == 0 && w2 == 0) throw ConfigError("at least one of w1, w2 must be positive");
  if (alphas.empty()) throw ConfigError("alpha list is empty");
  bool any_positive = false;
  for (double a : alphas) {
    if (a < 0) throw ConfigError("channel alpha must be nonnegative");
    any_positive |= a > 0;
  }
  if (!any_positive) throw ConfigError("at least one channel alpha must be positive");
}

void EnergyPolicy::Validate() const {
  if (e_min == 0) throw ConfigError("e_min must be positive");
  if (e_max < e_min) throw ConfigError("e_max must be >= e_min");
  if (!(s_ref > 0)) throw ConfigError("s_ref must be positive");
}

double CoverageReward(std::span<const double> gains, const ScoreWeights& weights) {
  if (gains.size() != weights.alphas.size())
    throw ConfigError("got " + std::to_string(gains.size()) + " channel gains for " +
                      std::to_string(weights.alphas.size()) + " alpha weights");
  double rc = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) rc += weights.alphas[i] * gains[i];
  return rc;
}

double CoverageReward(std::span<const ChannelGain> gains, const ScoreWeights& weights) {
  std::vector<double> g;
  g.reserve(gains.size());
  for (const auto& cg : gains) g.push_back(cg.gain);
  return CoverageReward(g, weights);
}

double EfficiencyReward(const ExecutionRecord& record, const ScoreWeights& weights,
                        double time_floor_s) {
  double total = 0.0;
  for (const auto& cg : record.gains) total += cg.gain;
  if (total == 0.0) return 0.0;
  const double t = std::max(record.exec_time_s, time_floor_s);
  return weights.beta * (1.0 / t) * total;
}

ScoreBreakdown Score(const ExecutionRecord& record, const ScoreWeights& weights,
                     double time_floor_s) {
  ScoreBreakdown b;
  b.rc = CoverageReward(std::span<const ChannelGain>(record.gains), weights);
  b.re = EfficiencyReward(record, weights, time_floor_s);
  b.s = weights.w1 * b.rc + weights.w2 * b.re;
  return b;
}

uint32_t AssignEnergy(double s, const EnergyPolicy& policy) {
  const double s_ref = std::max(policy.s_ref, kReferenceScoreFloor);
  const double ratio = std::clamp(s / s_ref, 0.0, 1.0);
  const double span = static_cast<double>(policy.e_max) - static_cast<double>(policy.e_min);
  const double e = std::round(static_cast<double>(policy.e_min) + span * ratio);
  return std::clamp(static_cast<uint32_t>(e), policy.e_min, policy.e_max);
}

double ReferenceScore(std::span<const double> scores, double quantile) {
  if (scores.empty()) return kReferenceScoreFloor;
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return std::max(sorted[rank - 1], kReferenceScoreFloor);
}

}  // namespace mcfuzz

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

// Per-channel edge coverage: raw hit-count maps, the 8-level bucket
// classification, virgin (ever-seen) state and normalized coverage gain.

#ifndef MCFUZZ_COVERAGE_COVERAGE_HPP_
#define MCFUZZ_COVERAGE_COVERAGE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mcfuzz {

using ChannelId = uint32_t;

inline constexpr std::size_t kDefaultMapSize = 65536;
inline constexpr std::size_t kMinMapSize = 64;
inline constexpr int kNumBuckets = 8;

// Throws ConfigError unless size is a power of two and >= kMinMapSize.
void ValidateMapSize(std::size_t size);

// Bucket for a raw hit count: 0, 1, 2, 3-4, 5-8, 9-16, 17-32, >32 -> 0..7.
uint8_t BucketOf(uint8_t hits);

// One channel's coverage bitmap. In raw mode cells hold saturating hit
// counters; after ClassifyCounts() every cell is a bucket index in 0..7.
class CoverageMap {
 public:
  CoverageMap(ChannelId channel, std::size_t size);

  // Wraps already-classified bucket bytes (e.g. received from a collector).
  static CoverageMap FromClassified(ChannelId channel, std::span<const uint8_t> buckets);

  ChannelId channel() const { return channel_; }
  std::size_t size() const { return cells_.size(); }
  bool classified() const { return classified_; }

  std::span<uint8_t> cells() { return cells_; }
  std::span<const uint8_t> cells() const { return cells_; }

  // Raw-mode increment with saturation at 255.
  void RecordHit(uint32_t edge);

  friend void ClassifyCounts(CoverageMap& map);
  friend void SnapshotReset(CoverageMap& map);

 private:
  CoverageMap() = default;

  ChannelId channel_ = 0;
  std::vector<uint8_t> cells_;
  bool classified_ = false;
};

// Replaces every raw counter with its bucket. No-op on a classified map.
void ClassifyCounts(CoverageMap& map);

// Classifies a raw counter buffer in place (used on shared-memory snapshots).
void ClassifyBuffer(std::span<uint8_t> cells);

// Zeroes every cell and returns the map to raw mode.
void SnapshotReset(CoverageMap& map);

// Accumulated (edge, bucket) observations for one channel: bit k of
// masks[e] is set once bucket k has been seen on edge e. Bits are never
// cleared.
class VirginState {
 public:
  VirginState(ChannelId channel, std::size_t size);

  ChannelId channel() const { return channel_; }
  std::size_t size() const { return masks_.size(); }
  std::span<const uint8_t> masks() const { return masks_; }

  // Number of edges with a nonzero mask; maintained incrementally.
  std::size_t covered_edges() const { return covered_; }

  // Total number of set bits across all masks.
  std::size_t observed_pairs() const { return pairs_; }

 private:
  friend struct NewBitsAccess;
  ChannelId channel_;
  std::vector<uint8_t> masks_;
  std::size_t covered_ = 0;
  std::size_t pairs_ = 0;
};

// Normalized coverage gain of one execution on one channel.
struct ChannelGain {
  ChannelId channel = 0;
  std::size_t new_edges = 0;
  double gain = 0.0;  // new_edges / size_m
};

struct NewBitsResult {
  bool novel = false;
  ChannelGain gain;
};

// Folds a classified map into the virgin state. An edge counts toward
// new_edges when its mask gains at least one bit. Throws ConfigError on
// size/channel mismatch or an unclassified map.
NewBitsResult HasNewBits(const CoverageMap& map, VirginState& virgin);

std::size_t CountCoveredEdges(const VirginState& virgin);

struct ChannelDescriptor {
  ChannelId id = 0;
  std::string name;
  double alpha = 0.0;
  std::string endpoint;  // "host:port" of the channel's collector, if any
  std::size_t map_size = kDefaultMapSize;
};

// Ordered channel list; channel 0 is the entry component (main channel).
class ChannelSet {
 public:
  ChannelSet() = default;
  explicit ChannelSet(std::vector<ChannelDescriptor> channels);

  std::size_t size() const { return channels_.size(); }
  ChannelId main_channel() const { return 0; }
  const ChannelDescriptor& operator[](std::size_t i) const { return channels_[i]; }
  ChannelDescriptor& operator[](std::size_t i) { return channels_[i]; }
  auto begin() const { return channels_.begin(); }
  auto end() const { return channels_.end(); }

  std::vector<double> alphas() const;

 private:
  std::vector<ChannelDescriptor> channels_;
};

}  // namespace mcfuzz

#endif  // MCFUZZ_COVERAGE_COVERAGE_HPP_

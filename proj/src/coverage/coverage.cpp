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

#include "mcfuzz/coverage/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <set>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {
namespace {

constexpr std::array<uint8_t, 256> MakeBucketTable() {
  std::array<uint8_t, 256> t{};
  for (int h = 0; h < 256; ++h) {
    uint8_t b;
    if (h == 0) b = 0;
    else if (h == 1) b = 1;
    else if (h == 2) b = 2;
    else if (h <= 4) b = 3;
    else if (h <= 8) b = 4;
    else if (h <= 16) b = 5;
    else if (h <= 32) b = 6;
    else b = 7;
    t[h] = b;
  }
  return t;
}

constexpr std::array<uint8_t, 256> kBucketTable = MakeBucketTable();

// Maps are sparse; whole zero words are skipped.
template <typename Fn>
void ForEachNonzero(std::span<const uint8_t> cells, Fn&& fn) {
  const std::size_t n = cells.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    uint64_t word;
    std::memcpy(&word, cells.data() + i, sizeof(word));
    if (word == 0) continue;
    for (std::size_t j = i; j < i + 8; ++j)
      if (cells[j] != 0) fn(j, cells[j]);
  }
  for (; i < n; ++i)
    if (cells[i] != 0) fn(i, cells[i]);
}

}  // namespace

void ValidateMapSize(std::size_t size) {
  if (size < kMinMapSize || !std::has_single_bit(size))
    throw ConfigError("map size " + std::to_string(size) +
                      " must be a power of two >= " + std::to_string(kMinMapSize));
}

uint8_t BucketOf(uint8_t hits) { return kBucketTable[hits]; }

CoverageMap::CoverageMap(ChannelId channel, std::size_t size)
    : channel_(channel), cells_(size, 0) {
  ValidateMapSize(size);
}

CoverageMap CoverageMap::FromClassified(ChannelId channel,
                                        std::span<const uint8_t> buckets) {
  ValidateMapSize(buckets.size());
  // Buckets are 0..7, so any set bit in 0xF8 of any byte is out of range.
  constexpr uint64_t kHighBits = 0xF8F8F8F8F8F8F8F8ull;
  uint64_t high = 0;
  for (std::size_t i = 0; i + 8 <= buckets.size(); i += 8) {
    uint64_t word;
    std::memcpy(&word, buckets.data() + i, sizeof(word));
    high |= word;
  }
  if (high & kHighBits) {
    for (std::size_t i = 0; i < buckets.size(); ++i)
      if (buckets[i] >= kNumBuckets)
        throw ConfigError("bucket value " + std::to_string(buckets[i]) +
                          " out of range at edge " + std::to_string(i));
  }
  CoverageMap map;
  map.channel_ = channel;
  map.cells_.assign(buckets.begin(), buckets.end());
  map.classified_ = true;
  return map;
}

void CoverageMap::RecordHit(uint32_t edge) {
  uint8_t& c = cells_.at(edge);
  if (c != 255) ++c;
}

void ClassifyBuffer(std::span<uint8_t> cells) {
  const std::size_t n = cells.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    uint64_t word;
    std::memcpy(&word, cells.data() + i, sizeof(word));
    if (word == 0) continue;
    for (std::size_t j = i; j < i + 8; ++j) cells[j] = kBucketTable[cells[j]];
  }
  for (; i < n; ++i) cells[i] = kBucketTable[cells[i]];
}

void ClassifyCounts(CoverageMap& map) {
  if (map.classified_) return;
  ClassifyBuffer(map.cells_);
  map.classified_ = true;
}

void SnapshotReset(CoverageMap& map) {
  std::fill(map.cells_.begin(), map.cells_.end(), 0);
  map.classified_ = false;
}

VirginState::VirginState(ChannelId channel, std::size_t size)
    : channel_(channel), masks_(size, 0) {
  ValidateMapSize(size);
}

struct NewBitsAccess {
  static NewBitsResult Apply(const CoverageMap& map, VirginState& virgin) {
    NewBitsResult result;
    result.gain.channel = map.channel();
    ForEachNonzero(map.cells(), [&](std::size_t edge, uint8_t bucket) {
      const uint8_t bit = static_cast<uint8_t>(1u << bucket);
      uint8_t& mask = virgin.masks_[edge];
      if (mask & bit) return;
      if (mask == 0) ++virgin.covered_;
      mask |= bit;
      ++virgin.pairs_;
      ++result.gain.new_edges;
    });
    result.novel = result.gain.new_edges > 0;
    result.gain.gain = static_cast<double>(result.gain.new_edges) /
                       static_cast<double>(map.size());
    return result;
  }
};

NewBitsResult HasNewBits(const CoverageMap& map, VirginState& virgin) {
  if (!map.classified())
    throw ConfigError("HasNewBits requires a classified map");
  if (map.size() != virgin.size())
    throw ConfigError("map size " + std::to_string(map.size()) +
                      " does not match virgin size " + std::to_string(virgin.size()));
  if (map.channel() != virgin.channel())
    throw ConfigError("map channel " + std::to_string(map.channel()) +
                      " does not match virgin channel " + std::to_string(virgin.channel()));
  return NewBitsAccess::Apply(map, virgin);
}

std::size_t CountCoveredEdges(const VirginState& virgin) { return virgin.covered_edges(); }

ChannelSet::ChannelSet(std::vector<ChannelDescriptor> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw ConfigError("channel set must have at least one channel");
  std::set<std::string> names;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].id != i)
      throw ConfigError("channel ids must be dense from 0; got " +
                        std::to_string(channels_[i].id) + " at position " + std::to_string(i));
    if (channels_[i].alpha < 0.0)
      throw ConfigError("channel " + channels_[i].name + " has negative alpha");
    if (!channels_[i].name.empty() && !names.insert(channels_[i].name).second)
      throw ConfigError("duplicate channel name " + channels_[i].name);
    ValidateMapSize(channels_[i].map_size);
  }
}

std::vector<double> ChannelSet::alphas() const {
  std::vector<double> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) out.push_back(c.alpha);
  return out;
}

}  // namespace mcfuzz

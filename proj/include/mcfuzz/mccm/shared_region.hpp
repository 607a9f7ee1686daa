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

// Named shared coverage region shared by a component, its collector and
// the launcher. Layout:
//
//   [0, 4)   "MCOV"
//   [4]      version (0x01)
//   [5]      channel id
//   [6, 8)   reserved, zero
//   [8, 12)  size_m (u32)
//   [12, 16) generation counter (u32, bumped by the component after each
//            handled message)
//   [16, 16 + size_m) saturating 8-bit hit counters
//
// Names starting with "file:" are backed by a regular memory-mapped file;
// all other names go through POSIX shm_open.

#ifndef MCFUZZ_MCCM_SHARED_REGION_HPP_
#define MCFUZZ_MCCM_SHARED_REGION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "mcfuzz/coverage/coverage.hpp"

namespace mcfuzz::mccm {

inline constexpr std::size_t kRegionHeaderSize = 16;
inline constexpr uint8_t kRegionVersion = 0x01;

class SharedRegion {
 public:
  // Creates (or truncates) and zeroes the region; the creator unlinks it on
  // destruction. Throws ConfigError.
  static SharedRegion Create(const std::string& name, ChannelId channel, std::size_t size_m);

  // Maps an existing region; nullopt when it does not exist or its header
  // is invalid.
  static std::optional<SharedRegion> Open(const std::string& name);

  SharedRegion(SharedRegion&& other) noexcept;
  SharedRegion& operator=(SharedRegion&& other) noexcept;
  SharedRegion(const SharedRegion&) = delete;
  SharedRegion& operator=(const SharedRegion&) = delete;
  ~SharedRegion();

  const std::string& name() const { return name_; }
  ChannelId channel() const;
  std::size_t size() const { return size_; }
  std::span<uint8_t> cells() { return {base_ + kRegionHeaderSize, size_}; }
  std::span<const uint8_t> cells() const { return {base_ + kRegionHeaderSize, size_}; }

  void RecordEdge(uint32_t edge) {
    uint8_t& c = base_[kRegionHeaderSize + edge];
    if (c != 255) ++c;
  }

  uint32_t generation() const;
  void BumpGeneration();
  void Zero();

  // Copies the counters into `out`, re-reading once if the generation moved
  // during the copy. Returns false if both attempts raced.
  bool Snapshot(std::span<uint8_t> out, int* retries = nullptr) const;

 private:
  SharedRegion(std::string name, uint8_t* base, std::size_t mapped, std::size_t size, bool owner);
  void Release();

  std::string name_;
  uint8_t* base_ = nullptr;
  std::size_t mapped_ = 0;
  std::size_t size_ = 0;
  bool owner_ = false;
};

// Unlinks a region by name; ignores missing regions.
void UnlinkRegion(const std::string& name);

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_SHARED_REGION_HPP_

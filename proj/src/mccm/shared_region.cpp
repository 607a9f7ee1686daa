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

#include "mcfuzz/mccm/shared_region.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <utility>

#include "mcfuzz/common/bytes.hpp"
#include "mcfuzz/common/error.hpp"

namespace mcfuzz::mccm {
namespace {

constexpr char kRegionMagic[4] = {'M', 'C', 'O', 'V'};
constexpr std::string_view kFilePrefix = "file:";

bool IsFileBacked(const std::string& name) { return name.rfind(kFilePrefix, 0) == 0; }

int OpenBacking(const std::string& name, int flags) {
  if (IsFileBacked(name))
    return ::open(name.c_str() + kFilePrefix.size(), flags | O_CLOEXEC, 0600);
  return ::shm_open(name.c_str(), flags, 0600);
}

std::atomic_ref<uint32_t> GenerationRef(uint8_t* base) {
  return std::atomic_ref<uint32_t>(*reinterpret_cast<uint32_t*>(base + 12));
}

}  // namespace

void UnlinkRegion(const std::string& name) {
  if (IsFileBacked(name))
    ::unlink(name.c_str() + kFilePrefix.size());
  else
    ::shm_unlink(name.c_str());
}

SharedRegion::SharedRegion(std::string name, uint8_t* base, std::size_t mapped, std::size_t size,
                           bool owner)
    : name_(std::move(name)), base_(base), mapped_(mapped), size_(size), owner_(owner) {}

SharedRegion SharedRegion::Create(const std::string& name, ChannelId channel, std::size_t size_m) {
  ValidateMapSize(size_m);
  if (channel > 255) throw ConfigError("region channel id must fit in one byte");
  const int fd = OpenBacking(name, O_RDWR | O_CREAT | O_TRUNC);
  if (fd < 0) throw ConfigError("cannot create region " + name + ": " + std::strerror(errno));
  const std::size_t mapped = kRegionHeaderSize + size_m;
  if (::ftruncate(fd, static_cast<off_t>(mapped)) != 0) {
    const int err = errno;
    ::close(fd);
    UnlinkRegion(name);
    throw ConfigError("cannot size region " + name + ": " + std::strerror(err));
  }
  void* p = ::mmap(nullptr, mapped, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (p == MAP_FAILED) {
    UnlinkRegion(name);
    throw ConfigError("cannot map region " + name + ": " + std::strerror(errno));
  }
  auto* base = static_cast<uint8_t*>(p);
  std::memset(base, 0, mapped);
  std::memcpy(base, kRegionMagic, 4);
  base[4] = kRegionVersion;
  base[5] = static_cast<uint8_t>(channel);
  Bytes size_le;
  PutU32(size_le, static_cast<uint32_t>(size_m));
  std::memcpy(base + 8, size_le.data(), 4);
  return SharedRegion(name, base, mapped, size_m, /*owner=*/true);
}

std::optional<SharedRegion> SharedRegion::Open(const std::string& name) {
  const int fd = OpenBacking(name, O_RDWR);
  if (fd < 0) return std::nullopt;
  struct stat st {};
  if (::fstat(fd, &st) != 0 || static_cast<std::size_t>(st.st_size) < kRegionHeaderSize) {
    ::close(fd);
    return std::nullopt;
  }
  const auto mapped = static_cast<std::size_t>(st.st_size);
  void* p = ::mmap(nullptr, mapped, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (p == MAP_FAILED) return std::nullopt;
  auto* base = static_cast<uint8_t*>(p);
  const uint32_t size = GetU32(base + 8);
  if (std::memcmp(base, kRegionMagic, 4) != 0 || base[4] != kRegionVersion ||
      kRegionHeaderSize + static_cast<std::size_t>(size) != mapped) {
    ::munmap(p, mapped);
    return std::nullopt;
  }
  return SharedRegion(name, base, mapped, size, /*owner=*/false);
}

SharedRegion::SharedRegion(SharedRegion&& other) noexcept
    : name_(std::move(other.name_)),
      base_(std::exchange(other.base_, nullptr)),
      mapped_(std::exchange(other.mapped_, 0)),
      size_(std::exchange(other.size_, 0)),
      owner_(std::exchange(other.owner_, false)) {}

SharedRegion& SharedRegion::operator=(SharedRegion&& other) noexcept {
  if (this != &other) {
    Release();
    name_ = std::move(other.name_);
    base_ = std::exchange(other.base_, nullptr);
    mapped_ = std::exchange(other.mapped_, 0);
    size_ = std::exchange(other.size_, 0);
    owner_ = std::exchange(other.owner_, false);
  }
  return *this;
}

SharedRegion::~SharedRegion() { Release(); }

void SharedRegion::Release() {
  if (base_) ::munmap(base_, mapped_);
  if (owner_) UnlinkRegion(name_);
  base_ = nullptr;
  owner_ = false;
}

ChannelId SharedRegion::channel() const { return base_[5]; }

uint32_t SharedRegion::generation() const {
  return GenerationRef(base_).load(std::memory_order_acquire);
}

void SharedRegion::BumpGeneration() {
  GenerationRef(base_).fetch_add(1, std::memory_order_release);
}

void SharedRegion::Zero() { std::memset(base_ + kRegionHeaderSize, 0, size_); }

bool SharedRegion::Snapshot(std::span<uint8_t> out, int* retries) const {
  if (out.size() != size_) throw ConfigError("snapshot buffer size mismatch");
  for (int attempt = 0; attempt < 2; ++attempt) {
    const uint32_t before = generation();
    std::memcpy(out.data(), base_ + kRegionHeaderSize, size_);
    std::atomic_thread_fence(std::memory_order_acquire);
    if (generation() == before) return true;
    if (retries) ++*retries;
  }
  return false;
}

}  // namespace mcfuzz::mccm

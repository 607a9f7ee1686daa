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

// MCCM wire protocol. All integers little-endian.
//
//   Frame    = "MCCM" | u8 version (0x01) | u8 msg_type | u32 payload_len | payload
//   PING     0x01 (empty)        -> PONG         0x81 (empty)
//   COLLECT  0x02 (empty)        -> COVERAGE     0x82 (u32 channel, u32 size_m, size_m buckets)
//   RESET    0x03 (empty)        -> ACK          0x83 (empty)
//   STATUS   0x04 (empty)        -> STATUS_REPLY 0x84 (u32 channel, u8 alive, u32 restarts)
//   any                          -> NACK         0x7f (u8 error code)

#ifndef MCFUZZ_MCCM_FRAME_HPP_
#define MCFUZZ_MCCM_FRAME_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcfuzz/common/bytes.hpp"
#include "mcfuzz/common/net.hpp"
#include "mcfuzz/coverage/coverage.hpp"

namespace mcfuzz::mccm {

inline constexpr uint8_t kFrameMagic[4] = {'M', 'C', 'C', 'M'};
inline constexpr uint8_t kFrameVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr uint32_t kMaxFramePayload = 16u << 20;

enum class MsgType : uint8_t {
  kPing = 0x01,
  kCollect = 0x02,
  kReset = 0x03,
  kStatus = 0x04,
  kNack = 0x7f,
  kPong = 0x81,
  kCoverage = 0x82,
  kAck = 0x83,
  kStatusReply = 0x84,
};

enum class NackCode : uint8_t {
  kMissingRegion = 0x01,
  kUnknownType = 0x02,
  kBadRequest = 0x03,
};

bool IsKnownType(uint8_t type);

struct Frame {
  uint8_t type = 0;
  Bytes payload;

  Frame() = default;
  Frame(MsgType t, Bytes p = {}) : type(static_cast<uint8_t>(t)), payload(std::move(p)) {}
  MsgType msg_type() const { return static_cast<MsgType>(type); }
  bool operator==(const Frame&) const = default;
};

Bytes EncodeFrame(const Frame& frame);

// Decodes the frame at the start of `buf`. Returns nullopt when more bytes
// are needed; on success sets *consumed. Throws ProtocolError on bad magic,
// bad version or an oversized payload. Unknown message types decode fine;
// callers decide how to answer them.
std::optional<Frame> DecodeFrame(ByteView buf, std::size_t* consumed);

struct CoveragePayload {
  ChannelId channel = 0;
  Bytes buckets;
};
Bytes EncodeCoverage(const CoveragePayload& p);
CoveragePayload DecodeCoverage(ByteView payload);

struct StatusPayload {
  ChannelId channel = 0;
  bool alive = false;
  uint32_t restart_count = 0;
};
Bytes EncodeStatus(const StatusPayload& p);
StatusPayload DecodeStatus(ByteView payload);

Frame MakeNack(NackCode code);

IoStatus SendFrame(int fd, const Frame& frame);
// Throws ProtocolError on a malformed header.
IoStatus RecvFrame(int fd, Frame& out, Clock::time_point deadline);

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_FRAME_HPP_

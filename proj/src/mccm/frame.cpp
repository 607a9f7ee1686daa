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

#include "mcfuzz/mccm/frame.hpp"

#include <cstring>
#include <string>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::mccm {

bool IsKnownType(uint8_t type) {
  switch (static_cast<MsgType>(type)) {
    case MsgType::kPing:
    case MsgType::kCollect:
    case MsgType::kReset:
    case MsgType::kStatus:
    case MsgType::kNack:
    case MsgType::kPong:
    case MsgType::kCoverage:
    case MsgType::kAck:
    case MsgType::kStatusReply:
      return true;
  }
  return false;
}

Bytes EncodeFrame(const Frame& frame) {
  const auto len = static_cast<uint32_t>(frame.payload.size());
  Bytes out(kFrameHeaderSize + len);
  std::memcpy(out.data(), kFrameMagic, 4);
  out[4] = kFrameVersion;
  out[5] = frame.type;
  for (int i = 0; i < 4; ++i) out[6 + i] = static_cast<uint8_t>(len >> (8 * i));
  if (len) std::memcpy(out.data() + kFrameHeaderSize, frame.payload.data(), len);
  return out;
}

namespace {

uint32_t CheckHeader(const uint8_t* hdr) {
  if (std::memcmp(hdr, kFrameMagic, 4) != 0) throw ProtocolError("bad frame magic");
  if (hdr[4] != kFrameVersion)
    throw ProtocolError("unsupported frame version " + std::to_string(hdr[4]));
  const uint32_t len = GetU32(hdr + 6);
  if (len > kMaxFramePayload)
    throw ProtocolError("frame payload length " + std::to_string(len) + " exceeds limit");
  return len;
}

}  // namespace

std::optional<Frame> DecodeFrame(ByteView buf, std::size_t* consumed) {
  if (buf.size() < kFrameHeaderSize) {
    // Reject garbage early rather than waiting for a full header.
    const std::size_t n = std::min<std::size_t>(buf.size(), 4);
    if (std::memcmp(buf.data(), kFrameMagic, n) != 0) throw ProtocolError("bad frame magic");
    return std::nullopt;
  }
  const uint32_t len = CheckHeader(buf.data());
  if (buf.size() - kFrameHeaderSize < len) return std::nullopt;
  Frame f;
  f.type = buf[5];
  f.payload.assign(buf.begin() + kFrameHeaderSize, buf.begin() + kFrameHeaderSize + len);
  if (consumed) *consumed = kFrameHeaderSize + len;
  return f;
}

Bytes EncodeCoverage(const CoveragePayload& p) {
  Bytes out;
  out.reserve(8 + p.buckets.size());
  PutU32(out, p.channel);
  PutU32(out, static_cast<uint32_t>(p.buckets.size()));
  out.insert(out.end(), p.buckets.begin(), p.buckets.end());
  return out;
}

CoveragePayload DecodeCoverage(ByteView payload) {
  if (payload.size() < 8) throw ProtocolError("COVERAGE payload shorter than 8 bytes");
  CoveragePayload p;
  p.channel = GetU32(payload.data());
  const uint32_t size = GetU32(payload.data() + 4);
  if (payload.size() - 8 != size)
    throw ProtocolError("COVERAGE size_m " + std::to_string(size) + " but " +
                        std::to_string(payload.size() - 8) + " bucket bytes");
  p.buckets.assign(payload.begin() + 8, payload.end());
  return p;
}

Bytes EncodeStatus(const StatusPayload& p) {
  Bytes out;
  PutU32(out, p.channel);
  out.push_back(p.alive ? 1 : 0);
  PutU32(out, p.restart_count);
  return out;
}

StatusPayload DecodeStatus(ByteView payload) {
  if (payload.size() != 9) throw ProtocolError("STATUS_REPLY payload must be 9 bytes");
  StatusPayload p;
  p.channel = GetU32(payload.data());
  p.alive = payload[4] != 0;
  p.restart_count = GetU32(payload.data() + 5);
  return p;
}

Frame MakeNack(NackCode code) { return Frame(MsgType::kNack, Bytes{static_cast<uint8_t>(code)}); }

IoStatus SendFrame(int fd, const Frame& frame) { return SendAll(fd, EncodeFrame(frame)); }

IoStatus RecvFrame(int fd, Frame& out, Clock::time_point deadline) {
  uint8_t hdr[kFrameHeaderSize];
  IoStatus s = RecvExact(fd, hdr, kFrameHeaderSize, deadline);
  if (s != IoStatus::kOk) return s;
  const uint32_t len = CheckHeader(hdr);
  out.type = hdr[5];
  out.payload.resize(len);
  if (len == 0) return IoStatus::kOk;
  return RecvExact(fd, out.payload.data(), len, deadline);
}

}  // namespace mcfuzz::mccm

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

// Wire format of the simulated core: TLV messages (type u8, length u16 LE,
// payload) carried in u32 length-prefixed transport frames.
//
// Entry requests: 0x10 REGISTER, 0x20 SETUP, 0x30 SERVICE_REQUEST, 0xFF RESET.
// Replies use type 0x80|request_type and carry a status code in payload[0].
//
// Downstream requests are prefixed with the 8-byte session token of the
// entry's current session; a downstream drops its own state whenever the
// token changes.

#ifndef MCFUZZ_SUTSIM_PROTOCOL_HPP_
#define MCFUZZ_SUTSIM_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "mcfuzz/common/bytes.hpp"

namespace mcfuzz::sutsim {

inline constexpr std::size_t kTlvHeaderSize = 3;
inline constexpr std::size_t kMaxTlvPayload = 4096;

namespace msg {
inline constexpr uint8_t kRegister = 0x10;
inline constexpr uint8_t kSetup = 0x20;
inline constexpr uint8_t kServiceRequest = 0x30;
inline constexpr uint8_t kReset = 0xFF;

// Downstream requests.
inline constexpr uint8_t kSmfCreate = 0x41;
inline constexpr uint8_t kNrfDiscover = 0x42;
inline constexpr uint8_t kUpfConfig = 0x43;
inline constexpr uint8_t kDownstreamReset = 0x4F;
}  // namespace msg

inline constexpr uint8_t ReplyType(uint8_t request) { return 0x80 | request; }

enum class Status : uint8_t {
  kOk = 0x00,
  kMalformed = 0x01,
  kUnknownType = 0x02,
  kNotRegistered = 0x03,
  kAlreadyRegistered = 0x04,
  kBadIdentity = 0x05,
  kBadSessionId = 0x06,
  kBadSessionType = 0x07,
  kSmfError = 0x08,
  kSpecialized = 0x09,
  kNoSession = 0x0A,
  kRejected = 0x0B,
  kBadService = 0x0C,
};

std::string_view StatusName(uint8_t status);

struct Tlv {
  uint8_t type = 0;
  Bytes payload;

  bool operator==(const Tlv&) const = default;
};

// Throws ConfigError if the payload exceeds kMaxTlvPayload.
Bytes EncodeTlv(const Tlv& tlv);

// Lenient parse used by the components: needs the 3-byte header and at
// least `length` payload bytes; bytes past the declared length are ignored.
// Returns nullopt when the declared length runs past the end.
std::optional<Tlv> ParseTlv(ByteView bytes);

Bytes MakeReply(uint8_t request_type, Status status, ByteView extra = {});

// Fuzzer-side session reset carrying the test case token.
Bytes MakeResetMessage(uint64_t token);

}  // namespace mcfuzz::sutsim

#endif  // MCFUZZ_SUTSIM_PROTOCOL_HPP_

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

#include "mcfuzz/sutsim/protocol.hpp"

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::sutsim {

std::string_view StatusName(uint8_t status) {
  switch (static_cast<Status>(status)) {
    case Status::kOk: return "ok";
    case Status::kMalformed: return "malformed";
    case Status::kUnknownType: return "unknown-type";
    case Status::kNotRegistered: return "not-registered";
    case Status::kAlreadyRegistered: return "already-registered";
    case Status::kBadIdentity: return "bad-identity";
    case Status::kBadSessionId: return "bad-session-id";
    case Status::kBadSessionType: return "bad-session-type";
    case Status::kSmfError: return "smf-error";
    case Status::kSpecialized: return "specialized";
    case Status::kNoSession: return "no-session";
    case Status::kRejected: return "rejected";
    case Status::kBadService: return "bad-service";
  }
  return "unknown";
}

Bytes EncodeTlv(const Tlv& tlv) {
  if (tlv.payload.size() > kMaxTlvPayload)
    throw ConfigError("TLV payload of " + std::to_string(tlv.payload.size()) + " bytes exceeds " +
                      std::to_string(kMaxTlvPayload));
  Bytes out;
  out.reserve(kTlvHeaderSize + tlv.payload.size());
  out.push_back(tlv.type);
  PutU16(out, static_cast<uint16_t>(tlv.payload.size()));
  out.insert(out.end(), tlv.payload.begin(), tlv.payload.end());
  return out;
}

std::optional<Tlv> ParseTlv(ByteView bytes) {
  if (bytes.size() < kTlvHeaderSize) return std::nullopt;
  const std::size_t len = GetU16(bytes.data() + 1);
  if (len > kMaxTlvPayload || kTlvHeaderSize + len > bytes.size()) return std::nullopt;
  Tlv tlv;
  tlv.type = bytes[0];
  tlv.payload.assign(bytes.begin() + kTlvHeaderSize, bytes.begin() + kTlvHeaderSize + len);
  return tlv;
}

Bytes MakeReply(uint8_t request_type, Status status, ByteView extra) {
  Tlv reply{ReplyType(request_type), {static_cast<uint8_t>(status)}};
  reply.payload.insert(reply.payload.end(), extra.begin(), extra.end());
  return EncodeTlv(reply);
}

Bytes MakeResetMessage(uint64_t token) {
  Tlv reset{msg::kReset, {}};
  PutU64(reset.payload, token);
  return EncodeTlv(reset);
}

}  // namespace mcfuzz::sutsim

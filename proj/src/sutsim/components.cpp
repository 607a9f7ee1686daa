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

#include "mcfuzz/sutsim/components.hpp"

#include <sstream>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::sutsim {

static_assert(edge::kSmfRecv == edge::kNrfRecv && edge::kNrfRecv == edge::kUpfRecv);
static_assert(edge::kSmfMalformed == edge::kNrfMalformed && edge::kNrfMalformed == edge::kUpfMalformed);
static_assert(edge::kSmfUnknownType == edge::kNrfUnknownType &&
              edge::kNrfUnknownType == edge::kUpfUnknownType);
static_assert(edge::kSmfSessionReset == edge::kNrfSessionReset &&
              edge::kNrfSessionReset == edge::kUpfSessionReset);

DefectSet DefectSet::Parse(const std::string& text) {
  DefectSet d;
  if (text == "none" || text.empty()) return d;
  if (text == "all") return All();
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "D1" || item == "d1") d.d1 = true;
    else if (item == "D2" || item == "d2") d.d2 = true;
    else if (item == "D3" || item == "d3") d.d3 = true;
    else throw ConfigError("unknown defect '" + item + "' (expected D1, D2, D3, all or none)");
  }
  return d;
}

std::string DefectSet::ToString() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(d1, "D1");
  add(d2, "D2");
  add(d3, "D3");
  return out.empty() ? "none" : out;
}

Bytes MakeDownstreamRequest(uint64_t token, const Tlv& request) {
  Bytes out;
  PutU64(out, token);
  const Bytes tlv = EncodeTlv(request);
  out.insert(out.end(), tlv.begin(), tlv.end());
  return out;
}

// ---- entry ----

Bytes EntryComponent::Handle(ByteView message) {
  edges_.Hit(edge::kRecvAny);
  const std::optional<Tlv> tlv = ParseTlv(message);
  if (!tlv) {
    edges_.Hit(edge::kParseMalformed);
    return MakeReply(message.empty() ? 0 : message[0], Status::kMalformed);
  }
  if (message.size() > kTlvHeaderSize + tlv->payload.size()) edges_.Hit(edge::kParseTrailing);

  switch (tlv->type) {
    case msg::kReset:
      edges_.Hit(edge::kReset);
      session_ = SessionState{};
      token_ = tlv->payload.size() >= 8 ? GetU64(tlv->payload.data()) : 0;
      return MakeReply(msg::kReset, Status::kOk);
    case msg::kRegister:
      ++session_.counters[0];
      return HandleRegister(tlv->payload);
    case msg::kSetup:
      ++session_.counters[1];
      return HandleSetup(tlv->payload);
    case msg::kServiceRequest:
      ++session_.counters[2];
      return HandleService(tlv->payload);
    default:
      ++session_.counters[3];
      edges_.Hit(edge::kUnknownType);
      return MakeReply(tlv->type, Status::kUnknownType);
  }
}

Bytes EntryComponent::HandleRegister(ByteView p) {
  edges_.Hit(edge::kRegisterRecv);
  auto reply = [](Status s) { return MakeReply(msg::kRegister, s); };
  if (session_.phase != Phase::kIdle) {
    edges_.Hit(edge::kRegisterAlready);
    return reply(Status::kAlreadyRegistered);
  }
  if (p.empty()) {
    edges_.Hit(edge::kRegisterShort);
    return reply(Status::kMalformed);
  }
  switch (p[0]) {
    case 0x01: {  // SUCI: scheme, declared output length, scheme output
      edges_.Hit(edge::kIdentitySuci);
      if (p.size() < 3) {
        edges_.Hit(edge::kRegisterShort);
        return reply(Status::kMalformed);
      }
      const uint8_t scheme = p[1];
      const uint8_t declared = p[2];
      const ByteView output = p.subspan(3);
      if (scheme == 0x00) {
        edges_.Hit(edge::kSuciNullScheme);
        if (output.size() > 9) {
          edges_.Hit(edge::kSuciNullTooLong);
          return reply(Status::kBadIdentity);
        }
        for (uint8_t digit : output) {
          if (digit > 9) {
            edges_.Hit(edge::kSuciNullBadDigit);
            return reply(Status::kBadIdentity);
          }
          edges_.Hit(edge::kSuciNullDigit);
        }
      } else if (scheme == 0x01 || scheme == 0x02) {
        edges_.Hit(edge::kSuciProfile);
        if (output.size() < 4) {
          edges_.Hit(edge::kSuciProfileShort);
          return reply(Status::kBadIdentity);
        }
      } else if (scheme >= 0xF0) {
        edges_.Hit(edge::kSuciReserved);
        // The reserved-scheme path copies `declared` bytes into a 16-byte
        // buffer without checking.
        if (declared > 16) {
          edges_.Hit(edge::kSuciReservedOverflow);
          if (defects_.d1) throw CrashTriggered{kD1Site};
          return reply(Status::kBadIdentity);
        }
      } else {
        edges_.Hit(edge::kSuciBadScheme);
        return reply(Status::kBadIdentity);
      }
      break;
    }
    case 0x02:  // GUTI
      edges_.Hit(edge::kIdentityGuti);
      if (p.size() < 10) {
        edges_.Hit(edge::kGutiShort);
        return reply(Status::kBadIdentity);
      }
      edges_.Hit(edge::kGutiOk);
      break;
    default:
      edges_.Hit(edge::kIdentityUnknown);
      return reply(Status::kBadIdentity);
  }
  edges_.Hit(edge::kRegisterAccept);
  session_.phase = Phase::kRegistered;
  return reply(Status::kOk);
}

void EntryComponent::QuerySmf(uint8_t hint, uint8_t ctx0, uint8_t ctx1) {
  edges_.Hit(edge::kSmfQuery);
  std::optional<Tlv> r;
  if (link_) r = link_->Call(Role::kSmf, token_, Tlv{msg::kSmfCreate, {hint, ctx0, ctx1}});
  if (!r || r->type != ReplyType(msg::kSmfCreate) || r->payload.size() < 3 ||
      r->payload[0] != static_cast<uint8_t>(Status::kOk)) {
    edges_.Hit(edge::kSmfUnavailable);
    session_.smf = SmfStatus::kUnavailable;
    session_.smf_cause = SmfCause::kNone;
    return;
  }
  if (r->payload[1] == wire::kSmfActive) {
    edges_.Hit(edge::kSmfActive);
    session_.smf = SmfStatus::kActive;
    session_.smf_cause = SmfCause::kNone;
  } else {
    edges_.Hit(edge::kSmfInactive);
    session_.smf = SmfStatus::kInactive;
    session_.smf_cause = r->payload[2] == static_cast<uint8_t>(SmfCause::kContextMismatch)
                             ? SmfCause::kContextMismatch
                             : SmfCause::kGeneric;
  }
}

void EntryComponent::QueryNrf(uint8_t mode, uint8_t t0, uint8_t t1) {
  edges_.Hit(edge::kNrfQuery);
  std::optional<Tlv> r;
  if (link_) r = link_->Call(Role::kNrf, token_, Tlv{msg::kNrfDiscover, {mode, t0, t1}});
  if (!r || r->type != ReplyType(msg::kNrfDiscover) || r->payload.size() < 2 ||
      r->payload[0] != static_cast<uint8_t>(Status::kOk)) {
    edges_.Hit(edge::kNrfUnavailable);
    session_.nrf = NrfResult::kUnavailable;
    return;
  }
  switch (r->payload[1]) {
    case wire::kNrfFull:
      edges_.Hit(edge::kNrfFull);
      session_.nrf = NrfResult::kFull;
      break;
    case wire::kNrfLimited:
      edges_.Hit(edge::kNrfLimited);
      session_.nrf = NrfResult::kLimited;
      break;
    case wire::kNrfNone:
      edges_.Hit(edge::kNrfNone);
      session_.nrf = NrfResult::kNone;
      break;
    default:
      edges_.Hit(edge::kNrfInvalid);
      session_.nrf = NrfResult::kInvalid;
      break;
  }
}

void EntryComponent::QueryUpf(uint8_t mode, uint8_t r0, uint8_t r1) {
  edges_.Hit(edge::kUpfQuery);
  std::optional<Tlv> r;
  if (link_) r = link_->Call(Role::kUpf, token_, Tlv{msg::kUpfConfig, {mode, r0, r1}});
  if (!r || r->type != ReplyType(msg::kUpfConfig) || r->payload.size() < 2 ||
      r->payload[0] != static_cast<uint8_t>(Status::kOk)) {
    edges_.Hit(edge::kUpfUnavailable);
    session_.upf = UpfStatus::kUnavailable;
    return;
  }
  switch (r->payload[1]) {
    case wire::kUpfComplete:
      edges_.Hit(edge::kUpfComplete);
      session_.upf = UpfStatus::kComplete;
      break;
    case wire::kUpfPartial:
      edges_.Hit(edge::kUpfPartial);
      session_.upf = UpfStatus::kPartial;
      break;
    default:
      edges_.Hit(edge::kUpfFailed);
      session_.upf = UpfStatus::kFailed;
      break;
  }
}

Bytes EntryComponent::HandleSetup(ByteView p) {
  edges_.Hit(edge::kSetupRecv);
  auto reply = [](Status s) { return MakeReply(msg::kSetup, s); };
  if (session_.phase == Phase::kIdle) {
    edges_.Hit(edge::kSetupNotRegistered);
    return reply(Status::kNotRegistered);
  }
  if (session_.phase == Phase::kSessionActive) edges_.Hit(edge::kSetupRepeat);
  if (p.size() < 5) {
    edges_.Hit(edge::kSetupShort);
    return reply(Status::kMalformed);
  }
  auto at = [&](std::size_t i) -> uint8_t { return i < p.size() ? p[i] : 0; };

  const uint8_t session_id = p[0];
  if (session_id < 1 || session_id > 15) {
    edges_.Hit(edge::kSetupBadSessionId);
    return reply(Status::kBadSessionId);
  }
  const uint8_t type = p[1];
  switch (type) {
    case 1: edges_.Hit(edge::kSetupTypeIpv4); break;
    case 2: edges_.Hit(edge::kSetupTypeIpv6); break;
    case 3: edges_.Hit(edge::kSetupTypeEthernet); break;
    case 4: edges_.Hit(edge::kSetupTypeUnstructured); break;
    default:
      edges_.Hit(edge::kSetupBadSessionType);
      return reply(Status::kBadSessionType);
  }

  QuerySmf(p[2], at(5), at(6));
  if (p[3] != 0) QueryNrf(p[3], at(7), at(8));
  if (p[4] != 0) QueryUpf(p[4], at(9), at(10));

  // Path 1: standard flow.
  if (session_.smf == SmfStatus::kActive && type != 3) {
    edges_.Hit(edge::kPath1Standard);
    if (type == 1) edges_.Hit(edge::kPath1Ipv4);
    else if (type == 2) edges_.Hit(edge::kPath1Ipv6);
    else edges_.Hit(edge::kPath1Unstructured);
    if (session_.phase != Phase::kSessionActive) edges_.Hit(edge::kPath1SessionActive);
    session_.phase = Phase::kSessionActive;
    session_.pdu_session_id = session_id;
    return reply(Status::kOk);
  }

  // Path 2: SMF error handling.
  if (session_.smf != SmfStatus::kActive) {
    edges_.Hit(edge::kPath2ErrorHandler);
    if (session_.smf == SmfStatus::kUnavailable) {
      edges_.Hit(edge::kPath2SmfUnavailable);
    } else if (session_.smf_cause == SmfCause::kContextMismatch) {
      edges_.Hit(edge::kPath2CauseMismatch);
      if (defects_.d2) throw CrashTriggered{kD2Site};
    } else {
      edges_.Hit(edge::kPath2CauseGeneric);
    }
    return reply(Status::kSmfError);
  }

  // Path 3: corner case across NRF, session type and UPF. Each operand of the
  // conjunction gets its own edge, as a compiler's short-circuit branches would.
  if (session_.nrf == NrfResult::kLimited) {
    edges_.Hit(edge::kPath3NrfLimited);
    if (type == 3) {
      edges_.Hit(edge::kPath3Ethernet);
      if (session_.upf == UpfStatus::kPartial) {
        edges_.Hit(edge::kPath3Specialized);
        if (defects_.d3) throw CrashTriggered{kD3Site};
        edges_.Hit(edge::kPath3Configure);
        session_.phase = Phase::kSessionActive;
        session_.pdu_session_id = session_id;
        return reply(Status::kSpecialized);
      }
    }
  }

  edges_.Hit(edge::kDefaultCase);
  return reply(Status::kRejected);
}

Bytes EntryComponent::HandleService(ByteView p) {
  edges_.Hit(edge::kServiceRecv);
  auto reply = [](Status s) { return MakeReply(msg::kServiceRequest, s); };
  if (session_.phase != Phase::kSessionActive) {
    edges_.Hit(edge::kServiceNoSession);
    return reply(Status::kNoSession);
  }
  if (p.empty()) {
    edges_.Hit(edge::kServiceShort);
    return reply(Status::kMalformed);
  }
  switch (p[0]) {
    case 0: edges_.Hit(edge::kServiceKeepalive); break;
    case 1: edges_.Hit(edge::kServiceUplinkData); break;
    case 2: edges_.Hit(edge::kServiceDownlinkData); break;
    case 3:
      edges_.Hit(edge::kServiceRelease);
      session_.phase = Phase::kRegistered;
      session_.pdu_session_id = 0;
      break;
    default:
      edges_.Hit(edge::kServiceBad);
      return reply(Status::kBadService);
  }
  return reply(Status::kOk);
}

// ---- downstream ----

DownstreamComponent::DownstreamComponent(Role role, EdgeRecorder edges) : role_(role), edges_(edges) {
  if (role == Role::kEntry) throw ConfigError("entry is not a downstream role");
}

Bytes DownstreamComponent::Handle(ByteView request) {
  edges_.Hit(edge::kSmfRecv);
  if (request.size() < 8) {
    edges_.Hit(edge::kSmfMalformed);
    return MakeReply(0, Status::kMalformed);
  }
  const uint64_t token = GetU64(request.data());
  if (token != token_) {
    edges_.Hit(edge::kSmfSessionReset);
    token_ = token;
    requests_ = 0;
  }
  ++requests_;
  const std::optional<Tlv> tlv = ParseTlv(request.subspan(8));
  if (!tlv) {
    edges_.Hit(edge::kSmfMalformed);
    return MakeReply(request.size() > 8 ? request[8] : 0, Status::kMalformed);
  }
  if (tlv->type == msg::kDownstreamReset) {
    edges_.Hit(role_ == Role::kSmf   ? edge::kSmfExplicitReset
               : role_ == Role::kNrf ? edge::kNrfExplicitReset
                                     : edge::kUpfExplicitReset);
    requests_ = 0;
    return MakeReply(msg::kDownstreamReset, Status::kOk);
  }
  if (role_ == Role::kSmf && tlv->type == msg::kSmfCreate) return HandleSmf(tlv->payload);
  if (role_ == Role::kNrf && tlv->type == msg::kNrfDiscover) return HandleNrf(tlv->payload);
  if (role_ == Role::kUpf && tlv->type == msg::kUpfConfig) return HandleUpf(tlv->payload);
  edges_.Hit(edge::kSmfUnknownType);
  return MakeReply(tlv->type, Status::kUnknownType);
}

Bytes DownstreamComponent::HandleSmf(ByteView body) {
  edges_.Hit(edge::kSmfCreate);
  if (body.size() < 3) {
    edges_.Hit(edge::kSmfShortBody);
    return MakeReply(msg::kSmfCreate, Status::kMalformed);
  }
  const uint8_t hint = body[0];
  if (hint == kInactiveHint) {
    edges_.Hit(edge::kSmfMarkInactive);
    auto cause = SmfCause::kGeneric;
    if (body[1] == kSmContextTrigger[0]) {
      edges_.Hit(edge::kSmfContextByte0);
      if (body[2] == kSmContextTrigger[1]) {
        edges_.Hit(edge::kSmfContextMismatch);
        cause = SmfCause::kContextMismatch;
      }
    }
    if (cause == SmfCause::kGeneric) edges_.Hit(edge::kSmfCauseGeneric);
    const uint8_t extra[] = {wire::kSmfInactive, static_cast<uint8_t>(cause)};
    return MakeReply(msg::kSmfCreate, Status::kOk, extra);
  }
  if (hint < 0x40) edges_.Hit(edge::kSmfHintLow);
  else if (hint < 0xC0) edges_.Hit(edge::kSmfHintMid);
  else edges_.Hit(edge::kSmfHintHigh);
  edges_.Hit(edge::kSmfMarkActive);
  const uint8_t extra[] = {wire::kSmfActive, static_cast<uint8_t>(SmfCause::kNone)};
  return MakeReply(msg::kSmfCreate, Status::kOk, extra);
}

Bytes DownstreamComponent::HandleNrf(ByteView body) {
  edges_.Hit(edge::kNrfDiscover);
  if (body.size() < 3) {
    edges_.Hit(edge::kNrfShortBody);
    return MakeReply(msg::kNrfDiscover, Status::kMalformed);
  }
  uint8_t result = wire::kNrfInvalid;
  switch (body[0]) {
    case 1:
      edges_.Hit(edge::kNrfModeFull);
      result = wire::kNrfFull;
      break;
    case 2:
      edges_.Hit(edge::kNrfModeTargeted);
      result = wire::kNrfFull;
      if (body[1] == kNfTargetTrigger[0]) {
        edges_.Hit(edge::kNrfTargetByte0);
        if (body[2] == kNfTargetTrigger[1]) {
          edges_.Hit(edge::kNrfTargetLimited);
          result = wire::kNrfLimited;
        }
      }
      if (result != wire::kNrfLimited) edges_.Hit(edge::kNrfTargetMiss);
      break;
    case 3:
      edges_.Hit(edge::kNrfModeNone);
      result = wire::kNrfNone;
      break;
    default:
      edges_.Hit(edge::kNrfModeInvalid);
      break;
  }
  const uint8_t extra[] = {result};
  return MakeReply(msg::kNrfDiscover, Status::kOk, extra);
}

Bytes DownstreamComponent::HandleUpf(ByteView body) {
  edges_.Hit(edge::kUpfConfig);
  if (body.size() < 3) {
    edges_.Hit(edge::kUpfShortBody);
    return MakeReply(msg::kUpfConfig, Status::kMalformed);
  }
  uint8_t result = wire::kUpfFailed;
  switch (body[0]) {
    case 1:
      edges_.Hit(edge::kUpfModeRules);
      result = wire::kUpfComplete;
      if (body[1] == kPdrRuleTrigger[0]) {
        edges_.Hit(edge::kUpfRuleByte0);
        if (body[2] == kPdrRuleTrigger[1]) {
          edges_.Hit(edge::kUpfRulePartial);
          result = wire::kUpfPartial;
        }
      }
      if (result != wire::kUpfPartial) edges_.Hit(edge::kUpfRuleMiss);
      break;
    case 2:
      edges_.Hit(edge::kUpfModeComplete);
      result = wire::kUpfComplete;
      break;
    default:
      edges_.Hit(edge::kUpfModeFailed);
      break;
  }
  const uint8_t extra[] = {result};
  return MakeReply(msg::kUpfConfig, Status::kOk, extra);
}

std::vector<std::vector<Bytes>> ShippedSeedMessages() {
  const Bytes reg = EncodeTlv({msg::kRegister, {0x01, 0x00, 0x05, 0, 1, 2, 3, 4}});
  const Bytes setup = EncodeTlv({msg::kSetup, {0x01, 0x01, 0x00, 0x00, 0x00, 0, 0, 0, 0, 0, 0}});
  return {{reg}, {reg, setup}};
}

}  // namespace mcfuzz::sutsim

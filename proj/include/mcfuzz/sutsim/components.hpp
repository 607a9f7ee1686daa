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

// Message handling logic of the simulated components, independent of
// sockets and shared memory so it can be driven directly in tests.
//
// Entry (AMF-like) state table:
//   IDLE --REGISTER ok--> REGISTERED --SETUP path 1--> SESSION_ACTIVE
//   RESET (0xFF, 8-byte token) returns to IDLE and clears all flags.
//
// SETUP payload (missing trailing bytes read as 0, minimum 5 bytes):
//   [0] pdu_session_id (1..15)   [1] session_type (1 IPv4, 2 IPv6,
//   3 Ethernet, 4 unstructured)  [2] session_hint -> SMF
//   [3] discovery_mode -> NRF    [4] config_mode -> UPF
//   [5,6] sm_context -> SMF      [7,8] nf_target -> NRF
//   [9,10] pdr_rule -> UPF
// The SMF is always queried; the NRF only when discovery_mode != 0 and the
// UPF only when config_mode != 0. Flags persist until the session resets.
//
// Planted defects, all raised in the entry:
//   D1 (site 1001): REGISTER with a SUCI whose protection scheme is reserved
//       (>= 0xF0) and whose declared output length exceeds 16.
//   D2 (site 2002): SETUP that reaches the SMF error handler while the SMF
//       reports a context-mismatch cause (hint 0xEE and sm_context matching
//       kSmContextTrigger).
//   D3 (site 3003): SETUP with an Ethernet session while the NRF reports
//       limited discovery (discovery_mode 2, nf_target == kNfTargetTrigger)
//       and the UPF reports a partial configuration (config_mode 1,
//       pdr_rule == kPdrRuleTrigger), with the SMF session active.
// The multi-byte triggers are compared one byte at a time in the
// downstream components, so partial matches show up as downstream edges only.

#ifndef MCFUZZ_SUTSIM_COMPONENTS_HPP_
#define MCFUZZ_SUTSIM_COMPONENTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcfuzz/common/bytes.hpp"
#include "mcfuzz/sutsim/edge_map.hpp"
#include "mcfuzz/sutsim/protocol.hpp"

namespace mcfuzz::sutsim {

inline constexpr uint32_t kD1Site = 1001;
inline constexpr uint32_t kD2Site = 2002;
inline constexpr uint32_t kD3Site = 3003;

inline constexpr uint8_t kInactiveHint = 0xEE;
inline constexpr std::array<uint8_t, 2> kSmContextTrigger = {0x80, 0x7F};
inline constexpr std::array<uint8_t, 2> kNfTargetTrigger = {0xFF, 0x80};
inline constexpr std::array<uint8_t, 2> kPdrRuleTrigger = {0x7F, 0x01};

struct DefectSet {
  bool d1 = false;
  bool d2 = false;
  bool d3 = false;

  static DefectSet All() { return {true, true, true}; }
  // Comma-separated subset of "D1,D2,D3", or "none"/"all". Throws ConfigError.
  static DefectSet Parse(const std::string& text);
  std::string ToString() const;
};

// Thrown out of Handle() when a planted defect fires. The server turns it
// into a crash log line and exit code 77.
struct CrashTriggered {
  uint32_t site_id;
};

class EdgeRecorder {
 public:
  EdgeRecorder() = default;
  explicit EdgeRecorder(std::span<uint8_t> cells) : cells_(cells) {}

  // Saturating increment; ids outside the map are dropped.
  void Hit(uint32_t id) {
    if (id >= cells_.size()) return;
    uint8_t& c = cells_[id];
    if (c != 255) ++c;
  }

 private:
  std::span<uint8_t> cells_;
};

enum class Phase : uint8_t { kIdle, kRegistered, kSessionActive };
enum class SmfStatus : uint8_t { kUnknown, kActive, kInactive, kUnavailable };
enum class SmfCause : uint8_t { kNone = 0, kGeneric = 1, kContextMismatch = 2 };
enum class NrfResult : uint8_t { kUnknown, kFull, kLimited, kNone, kInvalid, kUnavailable };
enum class UpfStatus : uint8_t { kUnknown, kComplete, kPartial, kFailed, kUnavailable };

struct SessionState {
  Phase phase = Phase::kIdle;
  SmfStatus smf = SmfStatus::kUnknown;
  SmfCause smf_cause = SmfCause::kNone;
  NrfResult nrf = NrfResult::kUnknown;
  UpfStatus upf = UpfStatus::kUnknown;
  uint8_t pdu_session_id = 0;
  // Receipt counts for REGISTER, SETUP, SERVICE_REQUEST, anything else.
  std::array<uint32_t, 4> counters{};
};

// Synchronous request to a downstream component. nullopt means the
// component did not answer within the deadline or could not be reached.
class DownstreamLink {
 public:
  virtual ~DownstreamLink() = default;
  virtual std::optional<Tlv> Call(Role role, uint64_t token, const Tlv& request) = 0;
};

class EntryComponent {
 public:
  EntryComponent(EdgeRecorder edges, DownstreamLink* link, DefectSet defects)
      : edges_(edges), link_(link), defects_(defects) {}

  // One request message in, one reply message out. Throws CrashTriggered.
  Bytes Handle(ByteView message);

  const SessionState& session() const { return session_; }
  uint64_t token() const { return token_; }

 private:
  Bytes HandleRegister(ByteView p);
  Bytes HandleSetup(ByteView p);
  Bytes HandleService(ByteView p);
  void QuerySmf(uint8_t hint, uint8_t ctx0, uint8_t ctx1);
  void QueryNrf(uint8_t mode, uint8_t t0, uint8_t t1);
  void QueryUpf(uint8_t mode, uint8_t r0, uint8_t r1);

  EdgeRecorder edges_;
  DownstreamLink* link_;
  DefectSet defects_;
  SessionState session_;
  uint64_t token_ = 0;
};

// SMF-, NRF- or UPF-like component. Requests arrive as 8-byte session token
// followed by one TLV.
class DownstreamComponent {
 public:
  DownstreamComponent(Role role, EdgeRecorder edges);

  Bytes Handle(ByteView request);

  Role role() const { return role_; }
  uint64_t token() const { return token_; }
  uint32_t requests_in_session() const { return requests_; }

 private:
  Bytes HandleSmf(ByteView body);
  Bytes HandleNrf(ByteView body);
  Bytes HandleUpf(ByteView body);

  Role role_;
  EdgeRecorder edges_;
  uint64_t token_ = 0;
  uint32_t requests_ = 0;
};

// Downstream wire codes carried in reply payload[0] (and [1] for the SMF cause).
namespace wire {
inline constexpr uint8_t kSmfActive = 0, kSmfInactive = 1;
inline constexpr uint8_t kNrfFull = 1, kNrfLimited = 2, kNrfNone = 3, kNrfInvalid = 4;
inline constexpr uint8_t kUpfComplete = 1, kUpfPartial = 2, kUpfFailed = 3;
}  // namespace wire

// Builds a downstream request frame body: token + TLV.
Bytes MakeDownstreamRequest(uint64_t token, const Tlv& request);

// The two shipped seeds: a valid REGISTER, and REGISTER followed by SETUP.
std::vector<std::vector<Bytes>> ShippedSeedMessages();

}  // namespace mcfuzz::sutsim

#endif  // MCFUZZ_SUTSIM_COMPONENTS_HPP_

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

// Edge ids of every branch site in the simulated components. The checked-in
// edge_map.tsv mirrors this table; a unit test keeps the two in sync.
//
// Path classes follow the setup handler's structure: path 1 is the standard
// flow, path 2 the SMF error handler, path 3 the NRF/UPF corner case. The
// three sets are disjoint.

#ifndef MCFUZZ_SUTSIM_EDGE_MAP_HPP_
#define MCFUZZ_SUTSIM_EDGE_MAP_HPP_

#include <cstdint>
#include <span>
#include <string_view>

namespace mcfuzz::sutsim {

enum class Role : uint8_t { kEntry = 0, kSmf = 1, kNrf = 2, kUpf = 3 };

std::string_view RoleName(Role role);
// Accepts "entry", "smf", "nrf", "upf"; throws ConfigError otherwise.
Role ParseRole(std::string_view name);

enum class PathClass : uint8_t { kCommon, kPath1, kPath2, kPath3, kDefault };

std::string_view PathClassName(PathClass p);

// X(role, id, constant, path)
#define MCFUZZ_SUTSIM_EDGES(X)                              \
  X(Entry, 0, RecvAny, Common)                              \
  X(Entry, 1, ParseMalformed, Common)                       \
  X(Entry, 2, ParseTrailing, Common)                        \
  X(Entry, 3, UnknownType, Common)                          \
  X(Entry, 4, Reset, Common)                                \
  X(Entry, 10, RegisterRecv, Common)                        \
  X(Entry, 11, RegisterAlready, Common)                     \
  X(Entry, 12, RegisterShort, Common)                       \
  X(Entry, 13, IdentitySuci, Common)                        \
  X(Entry, 14, IdentityGuti, Common)                        \
  X(Entry, 15, IdentityUnknown, Common)                     \
  X(Entry, 16, SuciNullScheme, Common)                      \
  X(Entry, 17, SuciNullDigit, Common)                       \
  X(Entry, 18, SuciNullBadDigit, Common)                    \
  X(Entry, 19, SuciNullTooLong, Common)                     \
  X(Entry, 20, SuciProfile, Common)                         \
  X(Entry, 21, SuciProfileShort, Common)                    \
  X(Entry, 22, SuciReserved, Common)                        \
  X(Entry, 23, SuciReservedOverflow, Common)                \
  X(Entry, 24, SuciBadScheme, Common)                       \
  X(Entry, 25, GutiShort, Common)                           \
  X(Entry, 26, GutiOk, Common)                              \
  X(Entry, 27, RegisterAccept, Common)                      \
  X(Entry, 40, SetupRecv, Common)                           \
  X(Entry, 41, SetupNotRegistered, Common)                  \
  X(Entry, 42, SetupShort, Common)                          \
  X(Entry, 43, SetupBadSessionId, Common)                   \
  X(Entry, 44, SetupBadSessionType, Common)                 \
  X(Entry, 45, SetupTypeIpv4, Common)                       \
  X(Entry, 46, SetupTypeIpv6, Common)                       \
  X(Entry, 47, SetupTypeEthernet, Common)                   \
  X(Entry, 48, SetupTypeUnstructured, Common)               \
  X(Entry, 49, SmfQuery, Common)                            \
  X(Entry, 50, SmfUnavailable, Common)                      \
  X(Entry, 51, SmfActive, Common)                           \
  X(Entry, 52, SmfInactive, Common)                         \
  X(Entry, 53, NrfQuery, Common)                            \
  X(Entry, 54, NrfUnavailable, Common)                      \
  X(Entry, 55, NrfFull, Common)                             \
  X(Entry, 56, NrfLimited, Common)                          \
  X(Entry, 57, NrfNone, Common)                             \
  X(Entry, 58, NrfInvalid, Common)                          \
  X(Entry, 59, UpfQuery, Common)                            \
  X(Entry, 60, UpfUnavailable, Common)                      \
  X(Entry, 61, UpfComplete, Common)                         \
  X(Entry, 62, UpfPartial, Common)                          \
  X(Entry, 63, UpfFailed, Common)                           \
  X(Entry, 64, SetupRepeat, Common)                         \
  X(Entry, 70, Path1Standard, Path1)                        \
  X(Entry, 71, Path1Ipv4, Path1)                            \
  X(Entry, 72, Path1Ipv6, Path1)                            \
  X(Entry, 73, Path1Unstructured, Path1)                    \
  X(Entry, 74, Path1SessionActive, Path1)                   \
  X(Entry, 80, Path2ErrorHandler, Path2)                    \
  X(Entry, 81, Path2CauseGeneric, Path2)                    \
  X(Entry, 82, Path2CauseMismatch, Path2)                   \
  X(Entry, 83, Path2SmfUnavailable, Path2)                  \
  X(Entry, 90, Path3Specialized, Path3)                     \
  X(Entry, 91, Path3Configure, Path3)                       \
  X(Entry, 92, Path3NrfLimited, Path3)                      \
  X(Entry, 93, Path3Ethernet, Path3)                        \
  X(Entry, 100, DefaultCase, Default)                       \
  X(Entry, 120, ServiceRecv, Common)                        \
  X(Entry, 121, ServiceNoSession, Common)                   \
  X(Entry, 122, ServiceShort, Common)                       \
  X(Entry, 123, ServiceKeepalive, Common)                   \
  X(Entry, 124, ServiceUplinkData, Common)                  \
  X(Entry, 125, ServiceDownlinkData, Common)                \
  X(Entry, 126, ServiceRelease, Common)                     \
  X(Entry, 127, ServiceBad, Common)                         \
  X(Smf, 0, SmfRecv, Common)                                \
  X(Smf, 1, SmfMalformed, Common)                           \
  X(Smf, 2, SmfUnknownType, Common)                         \
  X(Smf, 3, SmfSessionReset, Common)                        \
  X(Smf, 4, SmfCreate, Common)                              \
  X(Smf, 5, SmfShortBody, Common)                           \
  X(Smf, 6, SmfHintLow, Common)                             \
  X(Smf, 7, SmfHintMid, Common)                             \
  X(Smf, 8, SmfHintHigh, Common)                            \
  X(Smf, 9, SmfMarkInactive, Path2)                         \
  X(Smf, 10, SmfContextByte0, Path2)                        \
  X(Smf, 11, SmfContextMismatch, Path2)                     \
  X(Smf, 12, SmfCauseGeneric, Path2)                        \
  X(Smf, 13, SmfMarkActive, Common)                         \
  X(Smf, 14, SmfExplicitReset, Common)                      \
  X(Nrf, 0, NrfRecv, Common)                                \
  X(Nrf, 1, NrfMalformed, Common)                           \
  X(Nrf, 2, NrfUnknownType, Common)                         \
  X(Nrf, 3, NrfSessionReset, Common)                        \
  X(Nrf, 4, NrfDiscover, Common)                            \
  X(Nrf, 5, NrfShortBody, Common)                           \
  X(Nrf, 6, NrfModeFull, Common)                            \
  X(Nrf, 7, NrfModeTargeted, Common)                        \
  X(Nrf, 8, NrfTargetByte0, Path3)                          \
  X(Nrf, 9, NrfTargetLimited, Path3)                        \
  X(Nrf, 10, NrfTargetMiss, Common)                         \
  X(Nrf, 11, NrfModeNone, Common)                           \
  X(Nrf, 12, NrfModeInvalid, Common)                        \
  X(Nrf, 13, NrfExplicitReset, Common)                      \
  X(Upf, 0, UpfRecv, Common)                                \
  X(Upf, 1, UpfMalformed, Common)                           \
  X(Upf, 2, UpfUnknownType, Common)                         \
  X(Upf, 3, UpfSessionReset, Common)                        \
  X(Upf, 4, UpfConfig, Common)                              \
  X(Upf, 5, UpfShortBody, Common)                           \
  X(Upf, 6, UpfModeRules, Common)                           \
  X(Upf, 7, UpfRuleByte0, Path3)                            \
  X(Upf, 8, UpfRulePartial, Path3)                          \
  X(Upf, 9, UpfRuleMiss, Common)                            \
  X(Upf, 10, UpfModeComplete, Common)                       \
  X(Upf, 11, UpfModeFailed, Common)                         \
  X(Upf, 12, UpfExplicitReset, Common)

namespace edge {
#define MCFUZZ_SUTSIM_EDGE_CONST(role, id, name, path) inline constexpr uint32_t k##name = id;
MCFUZZ_SUTSIM_EDGES(MCFUZZ_SUTSIM_EDGE_CONST)
#undef MCFUZZ_SUTSIM_EDGE_CONST
}  // namespace edge

struct EdgeSite {
  Role role;
  uint32_t id;
  std::string_view name;
  PathClass path;
};

std::span<const EdgeSite> EdgeSites();

// Edge ids available to a role: entry 0-199, downstreams 0-99.
constexpr uint32_t EdgeBudget(Role role) { return role == Role::kEntry ? 200 : 100; }

}  // namespace mcfuzz::sutsim

#endif  // MCFUZZ_SUTSIM_EDGE_MAP_HPP_

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

// Process wrapper around the simulated components: maps the coverage
// region, serves the length-prefixed message transport, forwards entry
// sub-requests to downstream components, and turns planted-defect triggers
// into a crash log line plus exit code 77.

#ifndef MCFUZZ_SUTSIM_SERVER_HPP_
#define MCFUZZ_SUTSIM_SERVER_HPP_

#include <map>
#include <optional>
#include <string>

#include "mcfuzz/common/net.hpp"
#include "mcfuzz/sutsim/components.hpp"

namespace mcfuzz::sutsim {

inline constexpr int kDefaultDownstreamDeadlineMs = 100;

struct ComponentOptions {
  Role role = Role::kEntry;
  std::string region_name;  // MCCM_REGION
  Endpoint listen;          // MCCM_LISTEN
  uint32_t channel = 0;     // MCCM_CHANNEL
  DefectSet defects;
  std::string crash_log;  // empty: crash lines go to stderr only
  std::map<Role, Endpoint> downstreams;
  int downstream_deadline_ms = kDefaultDownstreamDeadlineMs;
};

// Fills region, listen address and channel from MCCM_REGION, MCCM_LISTEN and
// MCCM_CHANNEL where the options leave them unset. Throws ConfigError.
void ApplyLaunchEnvironment(ComponentOptions& options);

// Serves until the process is killed. Returns a process exit code for
// startup failures; a triggered defect never returns.
int RunComponent(const ComponentOptions& options);

// Formats "CRASH <component> <site_id> <token>".
std::string CrashLine(Role role, uint32_t site_id, uint64_t token);

struct CrashLineFields {
  std::string component;
  uint32_t site_id = 0;
  uint64_t token = 0;
};
std::optional<CrashLineFields> ParseCrashLine(const std::string& line);

}  // namespace mcfuzz::sutsim

#endif  // MCFUZZ_SUTSIM_SERVER_HPP_

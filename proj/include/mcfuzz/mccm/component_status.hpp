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

#ifndef MCFUZZ_MCCM_COMPONENT_STATUS_HPP_
#define MCFUZZ_MCCM_COMPONENT_STATUS_HPP_

#include <sys/types.h>

#include <cstdint>
#include <optional>
#include <string>

#include "mcfuzz/coverage/coverage.hpp"

namespace mcfuzz::mccm {

// Designated exit code a component uses to report a detected defect.
inline constexpr int kCrashExitCode = 77;

struct ExitDescriptor {
  bool signaled = false;
  int value = 0;        // exit code, or signal number when signaled
  double at_s = 0.0;    // seconds since the launcher started

  // Terminated by a signal, exit code >= 128, or kCrashExitCode.
  bool abnormal() const { return signaled || value >= 128 || value == kCrashExitCode; }
  std::string ToString() const;
};

struct ComponentStatus {
  ChannelId channel = 0;
  bool alive = false;
  pid_t pid = -1;
  uint32_t restart_count = 0;
  std::optional<ExitDescriptor> last_exit;
};

}  // namespace mcfuzz::mccm

#endif  // MCFUZZ_MCCM_COMPONENT_STATUS_HPP_

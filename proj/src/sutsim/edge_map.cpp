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

#include "mcfuzz/sutsim/edge_map.hpp"

#include <array>
#include <string>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz::sutsim {

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kEntry: return "entry";
    case Role::kSmf: return "smf";
    case Role::kNrf: return "nrf";
    case Role::kUpf: return "upf";
  }
  return "?";
}

Role ParseRole(std::string_view name) {
  for (Role r : {Role::kEntry, Role::kSmf, Role::kNrf, Role::kUpf})
    if (RoleName(r) == name) return r;
  throw ConfigError("unknown component role '" + std::string(name) + "'");
}

std::string_view PathClassName(PathClass p) {
  switch (p) {
    case PathClass::kCommon: return "common";
    case PathClass::kPath1: return "path1";
    case PathClass::kPath2: return "path2";
    case PathClass::kPath3: return "path3";
    case PathClass::kDefault: return "default";
  }
  return "?";
}

namespace {

#define MCFUZZ_SUTSIM_EDGE_ROW(role, id, name, path) \
  EdgeSite{Role::k##role, id, #name, PathClass::k##path},
constexpr EdgeSite kSites[] = {MCFUZZ_SUTSIM_EDGES(MCFUZZ_SUTSIM_EDGE_ROW)};
#undef MCFUZZ_SUTSIM_EDGE_ROW

}  // namespace

std::span<const EdgeSite> EdgeSites() { return kSites; }

}  // namespace mcfuzz::sutsim

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

#include "mcfuzz/sutsim/server.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <vector>

#include "mcfuzz/common/error.hpp"
#include "mcfuzz/mccm/component_status.hpp"
#include "mcfuzz/mccm/shared_region.hpp"

namespace mcfuzz::sutsim {
namespace {

class TcpDownstreamLink : public DownstreamLink {
 public:
  TcpDownstreamLink(std::map<Role, Endpoint> endpoints, int deadline_ms)
      : endpoints_(std::move(endpoints)), deadline_(deadline_ms) {}

  std::optional<Tlv> Call(Role role, uint64_t token, const Tlv& request) override {
    const auto ep = endpoints_.find(role);
    if (ep == endpoints_.end()) return std::nullopt;
    const auto deadline = Clock::now() + deadline_;
    Socket& sock = sockets_[role];
    if (!sock.valid()) {
      sock = ConnectTcp(ep->second, deadline_);
      if (!sock.valid()) return std::nullopt;
    }
    if (SendMessage(sock.fd(), MakeDownstreamRequest(token, request)) != IoStatus::kOk) {
      sock.Close();
      return std::nullopt;
    }
    Bytes reply;
    if (RecvMessage(sock.fd(), reply, deadline) != IoStatus::kOk) {
      // A late reply would desynchronize the stream; start over next time.
      sock.Close();
      return std::nullopt;
    }
    return ParseTlv(reply);
  }

 private:
  std::map<Role, Endpoint> endpoints_;
  std::chrono::milliseconds deadline_;
  std::map<Role, Socket> sockets_;
};

[[noreturn]] void Crash(const ComponentOptions& options, uint32_t site, uint64_t token) {
  const std::string line = CrashLine(options.role, site, token) + "\n";
  if (!options.crash_log.empty()) {
    const int fd = ::open(options.crash_log.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd >= 0) {
      [[maybe_unused]] ssize_t n = ::write(fd, line.data(), line.size());
      ::fsync(fd);
      ::close(fd);
    }
  }
  [[maybe_unused]] ssize_t n = ::write(STDERR_FILENO, line.data(), line.size());
  ::_exit(mccm::kCrashExitCode);
}

}  // namespace

std::string CrashLine(Role role, uint32_t site_id, uint64_t token) {
  return "CRASH " + std::string(RoleName(role)) + " " + std::to_string(site_id) + " " +
         std::to_string(token);
}

std::optional<CrashLineFields> ParseCrashLine(const std::string& line) {
  std::istringstream in(line);
  std::string tag, extra;
  CrashLineFields f;
  if (!(in >> tag >> f.component >> f.site_id >> f.token) || tag != "CRASH") return std::nullopt;
  if (in >> extra) return std::nullopt;
  return f;
}

void ApplyLaunchEnvironment(ComponentOptions& options) {
  if (options.region_name.empty())
    if (const char* v = std::getenv("MCCM_REGION")) options.region_name = v;
  if (options.listen.port == 0)
    if (const char* v = std::getenv("MCCM_LISTEN")) options.listen = Endpoint::Parse(v);
  if (const char* v = std::getenv("MCCM_CHANNEL")) {
    char* end = nullptr;
    const unsigned long ch = std::strtoul(v, &end, 10);
    if (end == v || *end != '\0') throw ConfigError(std::string("bad MCCM_CHANNEL '") + v + "'");
    options.channel = static_cast<uint32_t>(ch);
  }
}

int RunComponent(const ComponentOptions& options) {
  if (options.listen.port == 0) {
    std::fprintf(stderr, "%s: no listen address (MCCM_LISTEN)\n", RoleName(options.role).data());
    return 2;
  }
  std::optional<mccm::SharedRegion> region;
  std::vector<uint8_t> local_cells;
  std::span<uint8_t> cells;
  if (!options.region_name.empty()) region = mccm::SharedRegion::Open(options.region_name);
  if (region) {
    cells = region->cells();
  } else {
    if (!options.region_name.empty())
      std::fprintf(stderr, "%s: region %s not available, coverage is not exported\n",
                   RoleName(options.role).data(), options.region_name.c_str());
    local_cells.resize(EdgeBudget(options.role));
    cells = local_cells;
  }
  if (cells.size() < EdgeBudget(options.role)) {
    std::fprintf(stderr, "%s: region has %zu cells, need %u\n", RoleName(options.role).data(),
                 cells.size(), EdgeBudget(options.role));
    return 2;
  }

  Socket listener;
  try {
    listener = ListenTcp(options.listen);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s: %s\n", RoleName(options.role).data(), e.what());
    return 2;
  }

  EdgeRecorder edges(cells);
  TcpDownstreamLink link(options.downstreams, options.downstream_deadline_ms);
  std::unique_ptr<EntryComponent> entry;
  std::unique_ptr<DownstreamComponent> downstream;
  if (options.role == Role::kEntry)
    entry = std::make_unique<EntryComponent>(edges, &link, options.defects);
  else
    downstream = std::make_unique<DownstreamComponent>(options.role, edges);

  const auto forever = Clock::time_point::max();
  Bytes request;
  for (;;) {
    Socket conn = AcceptWithTimeout(listener, std::chrono::hours(24));
    if (!conn.valid()) continue;
    for (;;) {
      if (RecvMessage(conn.fd(), request, forever) != IoStatus::kOk) break;
      Bytes reply;
      try {
        reply = entry ? entry->Handle(request) : downstream->Handle(request);
      } catch (const CrashTriggered& c) {
        Crash(options, c.site_id, entry ? entry->token() : downstream->token());
      }
      if (region) region->BumpGeneration();
      if (SendMessage(conn.fd(), reply) != IoStatus::kOk) break;
    }
  }
}

}  // namespace mcfuzz::sutsim

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

// Test double for a monitored component. Usage:
//   scripted_component serve     listen on MCCM_LISTEN and obey commands
//   scripted_component exit N    exit with code N right away
//   scripted_component sleep     never listen, never exit
// Commands are u32 length-prefixed messages:
//   "hit" + u32 edge ids   record the edges in MCCM_REGION, reply "ok"
//   "crash"                exit with code 77
//   "abort"                raise SIGABRT

#include <csignal>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <thread>

#include "mcfuzz/common/net.hpp"
#include "mcfuzz/mccm/shared_region.hpp"

using namespace mcfuzz;

namespace {

bool StartsWith(const Bytes& m, const char* word) {
  const std::size_t n = std::strlen(word);
  return m.size() >= n && std::memcmp(m.data(), word, n) == 0;
}

int Serve() {
  const char* listen = std::getenv("MCCM_LISTEN");
  if (!listen) return 2;
  std::optional<mccm::SharedRegion> region;
  if (const char* name = std::getenv("MCCM_REGION")) region = mccm::SharedRegion::Open(name);
  Socket server = ListenTcp(Endpoint::Parse(listen));
  for (;;) {
    Socket conn = AcceptWithTimeout(server, std::chrono::milliseconds(1000));
    if (!conn.valid()) continue;
    Bytes msg;
    while (RecvMessage(conn.fd(), msg, Clock::now() + std::chrono::hours(1)) == IoStatus::kOk) {
      if (StartsWith(msg, "crash")) std::_Exit(77);
      if (StartsWith(msg, "abort")) std::abort();
      if (StartsWith(msg, "hit") && region) {
        for (std::size_t i = 3; i + 4 <= msg.size(); i += 4) region->RecordEdge(GetU32(&msg[i]));
        region->BumpGeneration();
      }
      const Bytes ok = {'o', 'k'};
      if (SendMessage(conn.fd(), ok) != IoStatus::kOk) break;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return 2;
  const std::string mode = argv[1];
  if (mode == "serve") return Serve();
  if (mode == "exit") return argc > 2 ? std::atoi(argv[2]) : 0;
  if (mode == "sleep") {
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
  }
  return 2;
}

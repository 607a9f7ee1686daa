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

// mcfuzz-sut: one simulated core component per process.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mcfuzz/common/error.hpp"
#include "mcfuzz/sutsim/server.hpp"

int main(int argc, char** argv) {
  using namespace mcfuzz;
  CLI::App app{"Simulated multi-component core network target"};
  std::string role = "entry", listen, defects = "none", smf, nrf, upf;
  sutsim::ComponentOptions options;
  app.add_option("--role", role, "entry, smf, nrf or upf")->capture_default_str();
  app.add_option("--region", options.region_name, "coverage region name (default: $MCCM_REGION)");
  app.add_option("--listen", listen, "host:port to serve (default: $MCCM_LISTEN)");
  app.add_option("--defects", defects, "planted defects to enable: D1,D2,D3, all or none")
      ->capture_default_str();
  app.add_option("--crash-log", options.crash_log, "file that receives CRASH lines");
  app.add_option("--smf", smf, "SMF address (entry only)");
  app.add_option("--nrf", nrf, "NRF address (entry only)");
  app.add_option("--upf", upf, "UPF address (entry only)");
  app.add_option("--downstream-deadline-ms", options.downstream_deadline_ms)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    options.role = sutsim::ParseRole(role);
    options.defects = sutsim::DefectSet::Parse(defects);
    if (!listen.empty()) options.listen = Endpoint::Parse(listen);
    if (!smf.empty()) options.downstreams[sutsim::Role::kSmf] = Endpoint::Parse(smf);
    if (!nrf.empty()) options.downstreams[sutsim::Role::kNrf] = Endpoint::Parse(nrf);
    if (!upf.empty()) options.downstreams[sutsim::Role::kUpf] = Endpoint::Parse(upf);
    sutsim::ApplyLaunchEnvironment(options);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "mcfuzz-sut: %s\n", e.what());
    return 2;
  }
  return sutsim::RunComponent(options);
}

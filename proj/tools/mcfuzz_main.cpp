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

// mcfuzz: multi-component coverage-guided fuzzer for the simulated core.

#include <csignal>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcfuzz/common/error.hpp"
#include "mcfuzz/fuzzcore/campaign.hpp"
#include "mcfuzz/fuzzcore/config.hpp"
#include "mcfuzz/fuzzcore/selftest.hpp"
#include "mcfuzz/fuzzcore/stats.hpp"
#include "mcfuzz/fuzzcore/triage.hpp"
#include "mcfuzz/mutation/corpus_io.hpp"
#include "mcfuzz/sutsim/components.hpp"

namespace {

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop.store(true); }

mcfuzz::CampaignConfig LoadWithOverrides(const std::string& path,
                                         const std::vector<std::string>& overrides) {
  mcfuzz::CampaignConfig config = mcfuzz::LoadConfigFile(path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw mcfuzz::ConfigError("--set expects key=value, got '" + kv + "'");
    mcfuzz::SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mcfuzz;
  CLI::App app{"Multi-component coverage-guided fuzzer"};
  app.require_subcommand(1);

  std::string config_path, mode, seq_path, crash_dir, output;
  std::vector<std::string> overrides, csvs;
  std::optional<double> budget;
  std::optional<uint64_t> rng_seed;
  double bucket_s = 5.0;

  auto* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
  fuzz->add_option("--config", config_path, "campaign config file")->required();
  fuzz->add_option("--mode", mode, "multi or main-only")->check(CLI::IsMember({"multi", "main-only"}));
  fuzz->add_option("--budget", budget, "wall-clock budget in seconds");
  fuzz->add_option("--rng-seed", rng_seed, "campaign rng seed");
  fuzz->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* replay = app.add_subcommand("replay", "execute one sequence file and report");
  replay->add_option("seqfile", seq_path, "sequence file (.mcsq)")->required();
  replay->add_option("--config", config_path, "campaign config file")->required();
  replay->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* triage = app.add_subcommand("triage", "deduplicate the crashes in a crash directory");
  triage->add_option("crashdir", crash_dir, "crash directory")->required();

  auto* stats = app.add_subcommand("stats", "statistics tools");
  stats->require_subcommand(1);
  auto* summarize = stats->add_subcommand("summarize", "mean/min/max across runs per time bucket");
  summarize->add_option("csv", csvs, "stats CSV files")->required();
  summarize->add_option("--bucket", bucket_s, "bucket width in seconds")->capture_default_str();
  summarize->add_option("--output", output, "write the summary here instead of stdout");
  auto* check = stats->add_subcommand("check", "verify stats CSV invariants");
  check->add_option("csv", csvs, "stats CSV files")->required();

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");
  auto* keys = app.add_subcommand("config-keys", "list config keys with defaults");
  auto* seeds = app.add_subcommand("seeds", "write the built-in seeds as .mcsq files");
  seeds->add_option("dir", output, "destination directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fuzz) {
      CampaignConfig config = LoadWithOverrides(config_path, overrides);
      if (!mode.empty()) config.mode = ParseMode(mode);
      if (budget) config.budget_s = *budget;
      if (rng_seed) config.rng_seed = *rng_seed;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      const CampaignResult r = RunCampaign(config, &g_stop);
      if (r.exit_code == kExitOk) {
        std::cout << "execs " << r.execs << " in " << r.elapsed_s << " s, corpus " << r.corpus
                  << ", edges";
        for (std::size_t e : r.edges) std::cout << ' ' << e;
        std::cout << ", unique crashes " << r.crashes.size() << '\n';
        if (!r.crashes.empty()) std::cout << FormatTriageTable(r.crashes);
      }
      return r.exit_code;
    }
    if (*replay) {
      CampaignConfig config = LoadWithOverrides(config_path, overrides);
      config.Finalize();
      const MessageSequence seq = ReadSequenceFile(seq_path);
      Target target(config);
      const ReplayReport report = ReplayOnce(target, seq);
      std::cout << FormatReplay(target, seq, report);
      return kExitOk;
    }
    if (*triage) {
      const TriageReport report = TriageDirectory(crash_dir);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << FormatTriageTable(report.records);
      return kExitOk;
    }
    if (*summarize) {
      std::vector<StatsTable> runs;
      for (const auto& f : csvs) runs.push_back(ReadStatsCsv(f));
      const StatsSummary s = Summarize(runs, bucket_s);
      if (output.empty()) {
        WriteSummaryCsv(s, std::cout);
      } else {
        std::ofstream out(output);
        WriteSummaryCsv(s, out);
        if (!out) throw ConfigError("cannot write " + output);
      }
      return kExitOk;
    }
    if (*check) {
      bool ok = true;
      for (const auto& f : csvs) {
        const auto problems = CheckStatsInvariants(ReadStatsCsv(f));
        for (const auto& p : problems) std::cout << p << '\n';
        if (problems.empty()) std::cout << f << ": ok\n";
        ok &= problems.empty();
      }
      return ok ? kExitOk : 1;
    }
    if (*selftest) return RunSelfTest(std::cout) ? kExitOk : 1;
    if (*keys) {
      for (const ConfigKeyDoc& k : ConfigKeyDocs())
        std::cout << k.key << " = " << k.default_value << "\n    " << k.help << '\n';
      return kExitOk;
    }
    if (*seeds) {
      std::filesystem::create_directories(output);
      CampaignConfig defaults;
      for (const MessageSequence& seq : LoadInitialCorpus(defaults)) {
        const auto path = std::filesystem::path(output) / (seq.origin + ".mcsq");
        WriteSequenceFile(path, seq);
        std::cout << path.string() << '\n';
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "mcfuzz: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "mcfuzz: parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RestartStormError& e) {
    std::cerr << "mcfuzz: restart storm: " << e.what() << '\n';
    return kExitStorm;
  } catch (const TargetError& e) {
    std::cerr << "mcfuzz: target failure: " << e.what() << '\n';
    return kExitTarget;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "mcfuzz: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   1 bucket table          4 frame and COLLECT fidelity   7 overhead bound
//   2 new-bit equivalence   5 D1 crash pipeline            8 determinism
//   3 scoring arithmetic    6 multi vs main-only trials    9 stats integrity

#include <signal.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcfuzz/common/error.hpp"
#include "mcfuzz/common/net.hpp"
#include "mcfuzz/common/rng.hpp"
#include "mcfuzz/coverage/coverage.hpp"
#include "mcfuzz/fuzzcore/campaign.hpp"
#include "mcfuzz/fuzzcore/config.hpp"
#include "mcfuzz/fuzzcore/stats.hpp"
#include "mcfuzz/fuzzcore/target.hpp"
#include "mcfuzz/fuzzcore/triage.hpp"
#include "mcfuzz/mccm/controller.hpp"
#include "mcfuzz/mccm/frame.hpp"
#include "mcfuzz/mccm/launcher.hpp"
#include "mcfuzz/mutation/corpus_io.hpp"
#include "mcfuzz/scoring/scoring.hpp"
#include "mcfuzz/sutsim/components.hpp"
#include "mcfuzz/sutsim/protocol.hpp"

namespace {

using namespace mcfuzz;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

struct Options {
  fs::path work_dir = fs::temp_directory_path() / "mcfuzz-acceptance";
  fs::path config = fs::path(MCFUZZ_SOURCE_DIR) / "configs" / "sutsim.conf";
  fs::path sut = MCFUZZ_SUT_BINARY;
  fs::path scripted = MCFUZZ_SCRIPTED_COMPONENT;
  int trials = 10;
  double trial_s = 600;
  double overhead_s = 300;
  uint64_t determinism_execs = 50000;
  double stats_run_s = 12;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

// ---- 1 ----

// The table written out range by range, independent of the library's.
uint8_t TableBucket(int h) {
  struct Range {
    int lo, hi, bucket;
  };
  static constexpr Range kRanges[] = {{0, 0, 0},   {1, 1, 1},   {2, 2, 2},   {3, 4, 3},
                                      {5, 8, 4},   {9, 16, 5},  {17, 32, 6}, {33, 255, 7}};
  for (const auto& r : kRanges)
    if (h >= r.lo && h <= r.hi) return static_cast<uint8_t>(r.bucket);
  return 0xff;
}

Verdict BucketOracle(const Options&) {
  CoverageMap map(0, 256);
  for (int h = 0; h < 256; ++h) map.cells()[h] = static_cast<uint8_t>(h);
  ClassifyCounts(map);
  int mismatches = 0;
  for (int h = 0; h < 256; ++h) {
    if (map.cells()[h] != TableBucket(h)) ++mismatches;
    if (BucketOf(static_cast<uint8_t>(h)) != TableBucket(h)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(256 - mismatches / 2) + "/256 counter values match"};
}

// ---- 2 ----

Verdict NewBitEquivalence(const Options&) {
  constexpr std::size_t kSize = 1024;
  constexpr int kPairs = 2000;
  Rng rng(0xC0FFEE);
  int agree = 0;
  for (int pair = 0; pair < kPairs; ++pair) {
    // Random virgin state built from a random history, mirrored in a set.
    VirginState virgin(0, kSize);
    std::set<std::pair<std::size_t, int>> seen;
    const int history = static_cast<int>(rng.Below(5));
    auto random_map = [&] {
      Bytes b(kSize, 0);
      const std::size_t touched = rng.Below(kSize / 4);
      for (std::size_t k = 0; k < touched; ++k)
        b[rng.Below(kSize)] = static_cast<uint8_t>(rng.Between(1, 7));
      return b;
    };
    for (int h = 0; h < history; ++h) {
      const Bytes b = random_map();
      HasNewBits(CoverageMap::FromClassified(0, b), virgin);
      for (std::size_t i = 0; i < kSize; ++i)
        if (b[i]) seen.insert({i, b[i]});
    }
    const Bytes probe = random_map();
    std::set<std::size_t> fresh;
    for (std::size_t i = 0; i < kSize; ++i)
      if (probe[i] && !seen.count({i, probe[i]})) fresh.insert(i);
    const auto r = HasNewBits(CoverageMap::FromClassified(0, probe), virgin);
    if (r.novel == !fresh.empty() && r.gain.new_edges == fresh.size()) ++agree;
  }
  return {agree == kPairs, std::to_string(agree) + "/" + std::to_string(kPairs) + " pairs agree"};
}

// ---- 3 ----

bool Rel(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

Verdict ScoringArithmetic(const Options&) {
  ScoreWeights w;
  w.alphas = {0.4, 0.2, 0.2, 0.2};
  ExecutionRecord rec;
  const double c[] = {0.01, 0.0, 0.005, 0.0};
  for (ChannelId i = 0; i < 4; ++i) rec.gains.push_back({i, 0, c[i]});
  rec.exec_time_s = 0.05;
  const auto b = Score(rec, w);
  bool ok = Rel(b.rc, 0.005, 1e-12) && Rel(b.re, 0.03, 1e-12) && Rel(b.s, 0.0125, 1e-12);
  std::ostringstream detail;
  detail.precision(17);
  detail << "Rc=" << b.rc << " Re=" << b.re << " S=" << b.s;

  Rng rng(31337);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.Below(8);
    ScoreWeights rw;
    rw.w1 = rng.Unit();
    rw.w2 = rng.Unit();
    rw.beta = rng.Unit();
    ExecutionRecord r;
    double rc = 0, sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      rw.alphas.push_back(rng.Unit());
      const double g = rng.Chance(0.25) ? 0.0 : rng.Unit() / 64;
      r.gains.push_back({static_cast<ChannelId>(k), 0, g});
      rc += rw.alphas[k] * g;
      sum += g;
    }
    r.exec_time_s = 0.001 + rng.Unit() * 2;
    const double re = sum > 0 ? rw.beta * (1.0 / r.exec_time_s) * sum : 0.0;
    const double s = rw.w1 * rc + rw.w2 * re;
    const double got = Score(r, rw).s;
    if (s == 0 ? got == 0 : Rel(got, s, 1e-12)) ++agree;
  }
  ok = ok && agree == 1000;
  detail << "; " << agree << "/1000 random inputs agree";
  return {ok, detail.str()};
}

// ---- 4 ----

Verdict ProtocolConformance(const Options& opt) {
  using namespace mccm;
  const MsgType types[] = {MsgType::kPing,  MsgType::kCollect, MsgType::kReset,
                           MsgType::kStatus, MsgType::kNack,   MsgType::kPong,
                           MsgType::kCoverage, MsgType::kAck,  MsgType::kStatusReply};
  Rng rng(4);
  int roundtrips = 0;
  constexpr int kFrames = 5000;
  for (int i = 0; i < kFrames; ++i) {
    Frame f(types[rng.Below(std::size(types))]);
    f.payload.resize(rng.Chance(0.05) ? rng.Below(70000) : rng.Below(64));
    for (auto& b : f.payload) b = static_cast<uint8_t>(rng.Next());
    const Bytes wire = EncodeFrame(f);
    std::size_t used = 0;
    const auto back = DecodeFrame(wire, &used);
    if (back && *back == f && used == wire.size()) ++roundtrips;
  }

  // Scripted component writes known counts; COLLECT must equal the
  // classified counts byte for byte.
  Launcher launcher;
  LaunchSpec spec;
  spec.channel = 1;
  spec.executable = opt.scripted.string();
  spec.args = {"serve"};
  spec.map_size = 1024;
  spec.listen_port = PickFreePort();
  if (!launcher.Spawn(spec).alive) return {false, "scripted component did not start"};
  Socket conn = ConnectTcp({"127.0.0.1", spec.listen_port}, 1000ms);
  Controller controller({launcher.collector_endpoint(1)});
  int patterns_ok = 0;
  constexpr int kPatterns = 20;
  for (int p = 0; p < kPatterns; ++p) {
    controller.Exchange(1, Frame(MsgType::kReset));
    std::vector<int> counts(1024, 0);
    Bytes msg = {'h', 'i', 't'};
    auto hit = [&](uint32_t e) {
      PutU32(msg, e);
      if (counts[e] < 255) ++counts[e];
    };
    if (p == 0) {
      hit(5), hit(5), hit(9);
    } else {
      const int n = static_cast<int>(rng.Below(3000));
      for (int k = 0; k < n; ++k) hit(static_cast<uint32_t>(rng.Below(64) * rng.Below(16)));
    }
    Bytes reply;
    if (SendMessage(conn.fd(), msg) != IoStatus::kOk ||
        RecvMessage(conn.fd(), reply, Clock::now() + 2s) != IoStatus::kOk)
      return {false, "scripted component stopped answering"};
    const auto snaps = controller.Collect();
    if (snaps.size() != 1 || snaps[0].outcome != CollectOutcome::kOk) continue;
    bool same = true;
    for (int e = 0; e < 1024; ++e)
      same = same && snaps[0].map->cells()[e] == TableBucket(counts[e]);
    if (same) ++patterns_ok;
  }
  const bool ok = roundtrips == kFrames && patterns_ok == kPatterns;
  return {ok, std::to_string(roundtrips) + "/" + std::to_string(kFrames) + " frames round-trip; " +
                  std::to_string(patterns_ok) + "/" + std::to_string(kPatterns) +
                  " COLLECT snapshots byte-exact"};
}

// ---- campaign helpers ----

CampaignConfig ExperimentConfig(const Options& opt, const fs::path& out) {
  CampaignConfig c = LoadConfigFile(opt.config);
  c.sut_binary = opt.sut;
  c.output_dir = out;
  c.crash_dir.clear();
  c.queue_dir.clear();
  c.stats_file.clear();
  return c;
}

fs::path FreshDir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 5 ----

Verdict CrashPipeline(const Options& opt) {
  const fs::path dir = FreshDir(opt.work_dir / "crash-pipeline");
  CampaignConfig c = ExperimentConfig(opt, dir);
  c.defects = sutsim::DefectSet::Parse("D1");
  c.Finalize();
  Target target(c);
  CrashTable table(c.crash_dir);

  // Documented trigger: SUCI with a reserved protection scheme and a
  // declared output length over 16.
  MessageSequence trigger;
  trigger.messages = {sutsim::EncodeTlv({sutsim::msg::kRegister, {0x01, 0xF0, 0x11}})};
  const ExecResult first = target.Execute(trigger, CollectPolicy::kAll);
  for (const auto& cr : first.crashes)
    table.Add(cr.channel, cr.component, cr.site_id, first.testcase, target.Elapsed(), trigger);
  if (table.unique() != 1) return {false, std::to_string(table.unique()) + " crash records"};
  const CrashRecord rec = table.records()[0];
  if (rec.site_id != sutsim::kD1Site)
    return {false, "crash at site " + std::to_string(rec.site_id)};

  const MessageSequence witness = ReadSequenceFile(rec.witness);
  int reproduced = 0;
  for (int i = 0; i < 100; ++i) {
    const ReplayReport rep = ReplayOnce(target, witness);
    if (rep.exec.crashes.size() == 1 && rep.exec.crashes[0].component == rec.component &&
        rep.exec.crashes[0].channel == rec.channel && rep.exec.crashes[0].site_id == rec.site_id)
      ++reproduced;
  }
  return {reproduced == 100, "1 record (" + rec.component + ", site " + std::to_string(rec.site_id) +
                                 "); witness reproduces on " + std::to_string(reproduced) +
                                 "/100 replays"};
}

// ---- 6 ----

struct TrialOutcome {
  double d[3] = {INFINITY, INFINITY, INFINITY};
  uint64_t execs = 0;
  int exit_code = 0;
};

TrialOutcome RunTrial(const Options& opt, CampaignMode mode, uint64_t seed, const fs::path& out) {
  CampaignConfig c = ExperimentConfig(opt, FreshDir(out));
  c.mode = mode;
  c.rng_seed = seed;
  c.budget_s = opt.trial_s;
  c.exec_budget = 0;
  c.defects = sutsim::DefectSet::All();
  const CampaignResult r = RunCampaign(c);
  TrialOutcome t;
  t.execs = r.execs;
  t.exit_code = r.exit_code;
  for (const auto& cr : r.crashes) {
    const std::string label = DefectLabel(cr.site_id);
    if (label.size() == 2 && label[0] == 'D') {
      const int k = label[1] - '1';
      if (k >= 0 && k < 3) t.d[k] = std::min(t.d[k], cr.first_seen_s);
    }
  }
  return t;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return INFINITY;
  if (n % 2) return v[n / 2];
  const double a = v[n / 2 - 1], b = v[n / 2];
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) ? a : b;
  return (a + b) / 2;
}

std::string Secs(double s) {
  if (std::isinf(s)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", s);
  return buf;
}

Verdict MethodAdvantage(const Options& opt) {
  const fs::path dir = opt.work_dir / "method";
  fs::create_directories(dir);
  std::vector<TrialOutcome> multi, main_only;
  nlohmann::json log = nlohmann::json::array();
  for (int i = 0; i < opt.trials; ++i) {
    const uint64_t seed = 1000 + static_cast<uint64_t>(i);
    multi.push_back(RunTrial(opt, CampaignMode::kMulti, seed, dir / ("multi-" + std::to_string(i))));
    main_only.push_back(
        RunTrial(opt, CampaignMode::kMainOnly, seed, dir / ("main-only-" + std::to_string(i))));
    const auto& m = multi.back();
    const auto& b = main_only.back();
    std::printf("  trial %d seed %llu  multi D1 %s D2 %s D3 %s (%llu execs)  main-only D1 %s D2 %s D3 %s (%llu execs)\n",
                i, static_cast<unsigned long long>(seed), Secs(m.d[0]).c_str(), Secs(m.d[1]).c_str(),
                Secs(m.d[2]).c_str(), static_cast<unsigned long long>(m.execs), Secs(b.d[0]).c_str(),
                Secs(b.d[1]).c_str(), Secs(b.d[2]).c_str(), static_cast<unsigned long long>(b.execs));
    std::fflush(stdout);
    auto times = [](const TrialOutcome& t) {
      nlohmann::json j = nlohmann::json::array();
      for (double d : t.d) j.push_back(std::isinf(d) ? nlohmann::json(nullptr) : nlohmann::json(d));
      return j;
    };
    log.push_back({{"trial", i}, {"seed", seed}, {"multi", times(m)}, {"main_only", times(b)},
                   {"multi_execs", m.execs}, {"main_only_execs", b.execs},
                   {"multi_exit", m.exit_code}, {"main_only_exit", b.exit_code}});
    std::ofstream(dir / "trials.json") << log.dump(2) << '\n';
  }

  auto count = [](const std::vector<TrialOutcome>& v, int k) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [k](const TrialOutcome& t) {
      return std::isfinite(t.d[k]);
    }));
  };
  auto d2 = [](const std::vector<TrialOutcome>& v) {
    std::vector<double> out;
    for (const auto& t : v) out.push_back(t.d[1]);
    return out;
  };
  const int n = opt.trials;
  const bool a = count(multi, 0) == n && count(main_only, 0) == n;
  const double med_multi = Median(d2(multi)), med_main = Median(d2(main_only));
  const bool b = med_multi < med_main;
  const int d3_multi = count(multi, 2), d3_main = count(main_only, 2);
  const bool c = d3_multi * 10 >= 7 * n && d3_multi > d3_main;
  std::ostringstream detail;
  detail << "(a) D1 in " << count(multi, 0) << "/" << n << " multi, " << count(main_only, 0) << "/" << n
         << " main-only " << (a ? "ok" : "FAIL") << "; (b) median D2 " << Secs(med_multi) << " s multi vs "
         << Secs(med_main) << " s main-only " << (b ? "ok" : "FAIL") << "; (c) D3 in " << d3_multi << "/"
         << n << " multi vs " << d3_main << "/" << n << " main-only " << (c ? "ok" : "FAIL");
  return {a && b && c, detail.str()};
}

// ---- 7 ----

// Execs/s of one mode replaying a fixed corpus. Separates the cost of
// collection from the cost of the inputs each mode chooses to keep.
double ReplayRate(const Options& opt, CampaignMode mode, const std::vector<MessageSequence>& seqs,
                  const fs::path& out) {
  CampaignConfig c = ExperimentConfig(opt, FreshDir(out));
  c.mode = mode;
  c.defects = sutsim::DefectSet{};
  c.Finalize();
  Target t(c);
  constexpr int kRounds = 20;
  uint64_t execs = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < kRounds; ++r)
    for (const auto& seq : seqs) {
      t.Execute(seq);
      ++execs;
    }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s > 0 ? static_cast<double>(execs) / s : 0;
}

Verdict OverheadBound(const Options& opt) {
  double rate[2] = {0, 0};
  double msg_rate[2] = {0, 0};
  const CampaignMode modes[2] = {CampaignMode::kMainOnly, CampaignMode::kMulti};
  for (int i = 0; i < 2; ++i) {
    CampaignConfig c = ExperimentConfig(opt, FreshDir(opt.work_dir / "overhead" / ModeName(modes[i])));
    c.mode = modes[i];
    c.budget_s = opt.overhead_s;
    c.exec_budget = 0;
    c.defects = sutsim::DefectSet{};
    c.rng_seed = 7;
    const CampaignResult r = RunCampaign(c);
    if (r.exit_code != kExitOk) return {false, std::string(ModeName(modes[i])) + " run failed: " + r.message};
    rate[i] = r.elapsed_s > 0 ? static_cast<double>(r.execs) / r.elapsed_s : 0;
    msg_rate[i] = r.elapsed_s > 0 ? static_cast<double>(r.messages) / r.elapsed_s : 0;
  }
  const double ratio = rate[0] > 0 ? rate[1] / rate[0] : 0;

  // Diagnostic only: both modes replay the main-only corpus.
  std::vector<MessageSequence> seqs;
  for (const auto& e : fs::directory_iterator(opt.work_dir / "overhead" / "main-only" / "queue"))
    seqs.push_back(ReadSequenceFile(e.path()));
  std::sort(seqs.begin(), seqs.end(),
            [](const auto& a, const auto& b) { return a.origin < b.origin; });
  const double same_main = ReplayRate(opt, CampaignMode::kMainOnly, seqs, opt.work_dir / "overhead" / "replay");
  const double same_multi = ReplayRate(opt, CampaignMode::kMulti, seqs, opt.work_dir / "overhead" / "replay");

  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "multi %.0f execs/s vs main-only %.0f execs/s, ratio %.3f (need >= 0.75); "
                "messages/s %.0f vs %.0f; same inputs %.0f vs %.0f execs/s, ratio %.3f",
                rate[1], rate[0], ratio, msg_rate[1], msg_rate[0], same_multi, same_main,
                same_main > 0 ? same_multi / same_main : 0);
  return {ratio >= 0.75, buf};
}

// ---- 8 ----

Verdict Determinism(const Options& opt) {
  std::string admissions[2];
  std::set<std::pair<ChannelId, uint32_t>> crashes[2];
  uint64_t execs[2] = {0, 0};
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = FreshDir(opt.work_dir / "determinism" / std::to_string(run));
    CampaignConfig c = ExperimentConfig(opt, dir);
    c.budget_s = 0;
    c.exec_budget = opt.determinism_execs;
    c.timing = TimingMode::kNominal;
    c.rng_seed = 424242;
    c.defects = sutsim::DefectSet::All();
    const CampaignResult r = RunCampaign(c);
    if (r.exit_code != kExitOk) return {false, "run failed: " + r.message};
    admissions[run] = Slurp(dir / "admissions.log");
    for (const auto& cr : r.crashes) crashes[run].insert({cr.channel, cr.site_id});
    execs[run] = r.execs;
  }
  const auto lines = std::count(admissions[0].begin(), admissions[0].end(), '\n');
  const bool ok = !admissions[0].empty() && admissions[0] == admissions[1] && crashes[0] == crashes[1] &&
                  execs[0] == execs[1];
  return {ok, std::to_string(lines) + " admissions " + (admissions[0] == admissions[1] ? "identical" : "DIFFER") +
                  ", " + std::to_string(crashes[0].size()) + " unique crashes " +
                  (crashes[0] == crashes[1] ? "identical" : "DIFFER")};
}

// ---- 9 ----

Verdict StatsIntegrity(const Options& opt) {
  std::vector<StatsTable> tables;
  std::vector<std::string> problems;
  for (int run = 0; run < 5; ++run) {
    const fs::path dir = FreshDir(opt.work_dir / "stats" / std::to_string(run));
    CampaignConfig c = ExperimentConfig(opt, dir);
    c.budget_s = opt.stats_run_s;
    c.exec_budget = 0;
    c.stats_interval_s = 1;
    c.rng_seed = 90 + static_cast<uint64_t>(run);
    c.defects = sutsim::DefectSet::All();
    const CampaignResult r = RunCampaign(c);
    if (r.exit_code != kExitOk) return {false, "run failed: " + r.message};
    tables.push_back(ReadStatsCsv(dir / "stats.csv"));
    for (const auto& v : CheckStatsInvariants(tables.back())) problems.push_back(v);
  }
  const StatsSummary s = Summarize(tables, 2.0);
  std::size_t cells = 0, ordered = 0;
  for (const auto& b : s.buckets)
    for (std::size_t i = 0; i < b.mean.size(); ++i) {
      ++cells;
      if (b.min[i] <= b.mean[i] && b.mean[i] <= b.max[i]) ++ordered;
    }
  std::size_t rows = 0;
  for (const auto& t : tables) rows += t.rows.size();
  const bool ok = problems.empty() && cells > 0 && ordered == cells;
  std::string detail = std::to_string(rows) + " rows in 5 CSVs, " + std::to_string(problems.size()) +
                       " invariant violations; " + std::to_string(ordered) + "/" + std::to_string(cells) +
                       " summary cells with min <= mean <= max";
  if (!problems.empty()) detail += " (first: " + problems[0] + ")";
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  ::signal(SIGPIPE, SIG_IGN);
  Options opt;
  std::vector<int> selected;
  std::string work_dir = opt.work_dir.string(), config = opt.config.string();
  CLI::App app{"mcfuzz acceptance suite"};
  app.add_option("-c,--criteria", selected, "criteria to run (default: all)")->delimiter(',');
  app.add_option("--work-dir", work_dir, "scratch directory for campaign output");
  app.add_option("--config", config, "experiment config file");
  app.add_option("--trials", opt.trials, "paired trials for criterion 6");
  app.add_option("--trial-seconds", opt.trial_s, "campaign budget per trial for criterion 6");
  app.add_option("--overhead-seconds", opt.overhead_s, "campaign budget per mode for criterion 7");
  app.add_option("--determinism-execs", opt.determinism_execs, "executions per run for criterion 8");
  CLI11_PARSE(app, argc, argv);
  opt.work_dir = work_dir;
  opt.config = config;
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<const char*, std::function<Verdict(const Options&)>>> criteria = {
      {1, {"bucket oracle", BucketOracle}},
      {2, {"new-bit equivalence", NewBitEquivalence}},
      {3, {"scoring arithmetic", ScoringArithmetic}},
      {4, {"protocol conformance", ProtocolConformance}},
      {5, {"crash pipeline", CrashPipeline}},
      {6, {"method advantage", MethodAdvantage}},
      {7, {"overhead bound", OverheadBound}},
      {8, {"determinism", Determinism}},
      {9, {"stats integrity", StatsIntegrity}},
  };
  fs::create_directories(opt.work_dir);
  bool all = true;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto start = Clock::now();
    Verdict v;
    try {
      v = it->second.second(opt);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %d (%s): %s  %s [%.1f s]\n", k, it->second.first,
                v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}

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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcfuzz/common/error.hpp"
#include "mcfuzz/fuzzcore/campaign.hpp"
#include "mcfuzz/fuzzcore/config.hpp"
#include "mcfuzz/fuzzcore/stats.hpp"
#include "mcfuzz/fuzzcore/target.hpp"
#include "mcfuzz/fuzzcore/triage.hpp"
#include "mcfuzz/mutation/corpus_io.hpp"
#include "mcfuzz/sutsim/components.hpp"
#include "mcfuzz/sutsim/protocol.hpp"

namespace mcfuzz {
namespace {

namespace fs = std::filesystem;
using sutsim::EncodeTlv;
using sutsim::msg::kRegister;

fs::path FreshDir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("mcfuzz-test-" + std::to_string(::getpid()) + "-" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CampaignConfig TestConfig(const fs::path& out) {
  CampaignConfig c;
  c.sut_binary = MCFUZZ_SUT_BINARY;
  c.map_size = 4096;
  c.settle_ms = 0;
  c.output_dir = out;
  c.stats_interval_s = 1.0;
  c.defects = sutsim::DefectSet{};
  return c;
}

MessageSequence Seq(std::vector<Bytes> msgs) {
  MessageSequence s;
  s.messages = std::move(msgs);
  return s;
}

const Bytes kValidRegister = EncodeTlv({kRegister, {0x01, 0x00, 0x05, 0, 1, 2, 3, 4}});
const Bytes kD1Register = EncodeTlv({kRegister, {0x01, 0xF0, 0x20}});

// ---- config ----

TEST(Config, DefaultsMatchDocumentation) {
  CampaignConfig c;
  EXPECT_EQ(c.mode, CampaignMode::kMulti);
  EXPECT_EQ(c.map_size, 65536u);
  EXPECT_EQ(c.sweep_interval, 100u);
  EXPECT_EQ(c.settle_ms, 20);
  EXPECT_EQ(c.message_timeout_ms, 200);
  EXPECT_EQ(c.poll_interval_ms, 50);
  EXPECT_EQ(c.storm_limit, 10);
  EXPECT_DOUBLE_EQ(c.stats_interval_s, 5.0);
  const auto w = c.weights();
  ASSERT_EQ(w.alphas.size(), 4u);
  EXPECT_DOUBLE_EQ(w.alphas[0], 0.4);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(w.alphas[i], 0.2);
  for (const auto& doc : ConfigKeyDocs()) {
    CampaignConfig d;
    EXPECT_NO_THROW(SetConfigValue(d, doc.key, doc.default_value)) << doc.key;
  }
}

TEST(Config, ParsesTextWithComments) {
  const auto c = ParseConfigText(
      "# comment\n\nmode = main-only\nbudget_s=30\n  map_size = 1024 \nalphas = 0.5,0.1,0.2,0.2\n"
      "defects = D2\n");
  EXPECT_EQ(c.mode, CampaignMode::kMainOnly);
  EXPECT_DOUBLE_EQ(c.budget_s, 30);
  EXPECT_EQ(c.map_size, 1024u);
  EXPECT_TRUE(c.defects.d2);
  EXPECT_FALSE(c.defects.d1);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ParseConfigText("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("budget_s = 1\nbudget_s = 2\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("budget_s\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("budget_s = soon\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("mode = both\n"), ConfigError);
  CampaignConfig c;
  c.map_size = 100;
  EXPECT_THROW(c.Finalize(), ConfigError);
  c = CampaignConfig{};
  c.alphas = {1.0, 0.0};
  EXPECT_THROW(c.Finalize(), ConfigError);
  c = CampaignConfig{};
  c.collector_timeout_ms = 5;
  EXPECT_THROW(c.Finalize(), ConfigError);
}

TEST(Config, MainOnlyForcesBaseline) {
  CampaignConfig c;
  c.alphas = {0.4, 0.2, 0.2, 0.2};
  c.ApplyMode(CampaignMode::kMainOnly);
  EXPECT_EQ(c.sweep_interval, 0u);
  EXPECT_EQ(c.weights().alphas, (std::vector<double>{0.4, 0, 0, 0}));
}

TEST(Config, MainOnlyScoreEqualsMultiWithZeroedAlphas) {
  CampaignConfig multi;
  CampaignConfig main_only;
  main_only.ApplyMode(CampaignMode::kMainOnly);
  auto zeroed = multi.weights();
  for (std::size_t i = 1; i < zeroed.alphas.size(); ++i) zeroed.alphas[i] = 0;
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    ExecutionRecord r;
    for (ChannelId ch = 0; ch < 4; ++ch) r.gains.push_back({ch, 0, rng.Unit() * 0.01});
    r.exec_time_s = 0.001 + rng.Unit();
    EXPECT_EQ(Score(r, main_only.weights()).s, Score(r, zeroed).s);
  }
}

TEST(Config, FileResolvesRelativePaths) {
  const auto dir = FreshDir("cfg");
  std::ofstream(dir / "x.conf") << "output_dir = out\ncorpus_dir = /abs/seeds\n";
  const auto c = LoadConfigFile(dir / "x.conf");
  EXPECT_EQ(c.output_dir, dir / "out");
  EXPECT_EQ(c.corpus_dir, fs::path("/abs/seeds"));
  EXPECT_THROW(LoadConfigFile(dir / "missing.conf"), ConfigError);
  auto f = c;
  f.Finalize();
  EXPECT_EQ(f.crash_dir, dir / "out" / "crashes");
  EXPECT_EQ(f.stats_file, dir / "out" / "stats.csv");
  fs::remove_all(dir);
}

TEST(Config, DumpRoundTrips) {
  CampaignConfig c;
  c.mode = CampaignMode::kMainOnly;
  c.budget_s = 12;
  c.defects = sutsim::DefectSet::All();
  const auto back = ParseConfigText(DumpConfig(c));
  EXPECT_EQ(DumpConfig(back), DumpConfig(c));
}

// ---- stats ----

StatsRow Row(double t, uint64_t execs, uint64_t e0, uint64_t crashes) {
  StatsRow r;
  r.elapsed_s = t;
  r.execs = execs;
  r.execs_per_s = execs / t;
  r.edges = {e0, 1};
  r.rates = {0.5, 0};
  r.corpus = 2;
  r.unique_crashes = crashes > 0 ? 1 : 0;
  r.total_crashes = crashes;
  return r;
}

TEST(Stats, ColumnsAndRoundTrip) {
  EXPECT_EQ(StatsColumns(2),
            (std::vector<std::string>{"elapsed_s", "execs", "execs_per_s", "edges_ch0", "edges_ch1",
                                      "rate_ch0", "rate_ch1", "corpus", "unique_crashes",
                                      "total_crashes"}));
  const auto dir = FreshDir("stats");
  {
    StatsWriter w(dir / "s.csv", 2);
    w.Append(Row(5, 100, 10, 0));
    w.Append(Row(10, 250, 12, 3));
  }
  const auto t = ReadStatsCsv(dir / "s.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("execs")], 250);
  EXPECT_EQ(t.rows[1][t.column("total_crashes")], 3);
  EXPECT_EQ(t.column("nope"), -1);
  EXPECT_TRUE(CheckStatsInvariants(t).empty());
  fs::remove_all(dir);
}

TEST(Stats, InvariantViolationsReported) {
  StatsTable t;
  t.columns = StatsColumns(1);
  t.rows = {{5, 100, 20, 10, 1, 2, 0, 0}, {5, 90, 18, 9, 0, 2, 1, 0}};
  const auto v = CheckStatsInvariants(t);
  // elapsed not increasing, execs decreasing, edges decreasing, unique > total.
  EXPECT_GE(v.size(), 4u);
}

TEST(Stats, MalformedCsvRejected) {
  const auto dir = FreshDir("badcsv");
  std::ofstream(dir / "a.csv") << "elapsed_s,execs\n1,x\n";
  EXPECT_THROW(ReadStatsCsv(dir / "a.csv"), ConfigError);
  EXPECT_THROW(ReadStatsCsv(dir / "none.csv"), ConfigError);
  EXPECT_THROW(StatsWriter(dir, 1), ConfigError);  // a directory, not a file
  fs::remove_all(dir);
}

TEST(Stats, SummarizeMatchesArithmetic) {
  std::vector<StatsTable> runs;
  for (int r = 0; r < 5; ++r) {
    StatsTable t;
    t.columns = {"elapsed_s", "execs"};
    // Bucket 5 gets 5.1 then 5.4 (last wins); bucket 10 gets 9.8.
    t.rows = {{5.1, 100.0 + r}, {5.4, 200.0 + 10 * r}, {9.8, 1000.0 * (r + 1)}};
    runs.push_back(t);
  }
  const auto s = Summarize(runs, 5.0);
  ASSERT_EQ(s.columns, (std::vector<std::string>{"execs"}));
  ASSERT_EQ(s.buckets.size(), 2u);
  EXPECT_EQ(s.buckets[0].t, 5.0);
  EXPECT_EQ(s.buckets[0].runs, 5u);
  EXPECT_DOUBLE_EQ(s.buckets[0].mean[0], 220.0);
  EXPECT_EQ(s.buckets[0].min[0], 200.0);
  EXPECT_EQ(s.buckets[0].max[0], 240.0);
  EXPECT_DOUBLE_EQ(s.buckets[1].mean[0], 3000.0);
  for (const auto& b : s.buckets)
    for (std::size_t i = 0; i < b.mean.size(); ++i) {
      EXPECT_LE(b.min[i], b.mean[i]);
      EXPECT_LE(b.mean[i], b.max[i]);
    }
  std::ostringstream out;
  WriteSummaryCsv(s, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t_s,runs,execs_mean,execs_min,execs_max");
  runs[1].columns = {"elapsed_s", "corpus"};
  EXPECT_THROW(Summarize(runs, 5.0), ConfigError);
}

// ---- triage ----

TEST(Triage, DeduplicatesBySite) {
  const auto dir = FreshDir("triage");
  CrashTable table(dir);
  const auto w = Seq({kD1Register});
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(table.Add(0, "entry", 1001, 10 + i, 1.0 + i, w), i == 0);
  EXPECT_EQ(table.unique(), 1u);
  EXPECT_EQ(table.total(), 100u);
  const auto* r = table.Find(0, 1001);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->count, 100u);
  EXPECT_EQ(r->first_testcase, 10u);
  EXPECT_DOUBLE_EQ(r->first_seen_s, 1.0);
  EXPECT_EQ(ReadSequenceFile(r->witness), w);
  table.Add(0, "entry", 2002, 500, 200.0, w);
  EXPECT_EQ(table.unique(), 2u);
  EXPECT_EQ(table.records()[1].site_id, 2002u);
  EXPECT_EQ(DefectLabel(2002), "D2");
  EXPECT_EQ(DefectLabel(7), "");
  fs::remove_all(dir);
}

TEST(Triage, DirectorySkipsMalformedLines) {
  const auto dir = FreshDir("triagedir");
  std::ofstream(dir / "crash-entry.log")
      << "CRASH entry 1001 5\nCRASH entry 1001 9\ngarbage here\nCRASH entry 2002 12\n";
  const auto report = TriageDirectory(dir);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].site_id, 1001u);
  EXPECT_EQ(report.records[0].count, 2u);
  EXPECT_EQ(report.records[1].site_id, 2002u);
  EXPECT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(FormatTriageTable(report.records).find("D2"), std::string::npos);
  EXPECT_THROW(TriageDirectory(dir / "missing"), ConfigError);
  fs::remove_all(dir);
}

// ---- target ----

class TargetTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = FreshDir("target"); }
  void TearDown() override { fs::remove_all(dir_); }
  CampaignConfig Config(CampaignMode mode = CampaignMode::kMulti) {
    auto c = TestConfig(dir_);
    c.ApplyMode(mode);
    c.defects = sutsim::DefectSet::All();
    c.Finalize();
    return c;
  }
  fs::path dir_;
};

TEST_F(TargetTest, ResetOnlySequenceScoresZeroAfterWarmup) {
  Target t(Config());
  const auto seq = Seq({sutsim::MakeResetMessage(0)});
  for (int i = 0; i < 3; ++i) t.Execute(seq);
  const auto r = t.Execute(seq);
  EXPECT_FALSE(r.novel());
  for (const auto& g : r.record.gains) EXPECT_EQ(g.gain, 0.0);
  EXPECT_EQ(Score(r.record, Config().weights()).s, 0.0);
  EXPECT_TRUE(r.crashes.empty());
}

TEST_F(TargetTest, FirstRegisterIsNovelAndTriggersCollection) {
  Target t(Config());
  t.Execute(Seq({sutsim::MakeResetMessage(0)}));
  const auto r = t.Execute(Seq({kValidRegister}));
  ASSERT_EQ(r.statuses.size(), 1u);
  EXPECT_EQ(r.statuses[0], 0x00);
  EXPECT_TRUE(r.novel());
  EXPECT_EQ(r.novel_channels.front(), 0u);
  ASSERT_TRUE(r.collect_reason.has_value());
  EXPECT_EQ(*r.collect_reason, mccm::CollectReason::kMainNewBits);
  for (bool c : r.collected) EXPECT_TRUE(c);
  // Entry edges of the accepted REGISTER are now covered.
  const auto& v = t.virgin(0);
  EXPECT_NE(v.masks()[sutsim::edge::kRegisterAccept], 0);
  EXPECT_EQ(v.masks()[sutsim::edge::kPath1Standard], 0);
  const auto again = t.Execute(Seq({kValidRegister}));
  EXPECT_FALSE(again.novel());
}

TEST_F(TargetTest, D1TriggerCrashesAndTargetRecovers) {
  Target t(Config());
  const auto r = t.Execute(Seq({kD1Register, kValidRegister}));
  ASSERT_EQ(r.crashes.size(), 1u);
  EXPECT_EQ(r.crashes[0].site_id, sutsim::kD1Site);
  EXPECT_EQ(r.crashes[0].component, "entry");
  EXPECT_EQ(r.crashes[0].channel, 0u);
  EXPECT_EQ(r.crashes[0].testcase, r.testcase);
  EXPECT_FALSE(r.invalid);
  ASSERT_TRUE(r.collect_reason.has_value());
  const auto after = t.Execute(Seq({kValidRegister}));
  EXPECT_TRUE(after.crashes.empty());
  EXPECT_EQ(after.statuses[0], 0x00);
  EXPECT_EQ(t.restarts(), 1u);
}

TEST_F(TargetTest, CollectionOnlyThroughTheGate) {
  auto c = Config();
  c.sweep_interval = 5;
  Target t(c);
  t.controller().set_keep_log(true);
  const auto seq = Seq({kValidRegister});
  for (int i = 0; i < 23; ++i) t.Execute(seq);
  const auto& log = t.controller().request_log();
  ASSERT_FALSE(log.empty());
  std::size_t sweeps = 0;
  for (const auto& req : log) {
    EXPECT_NE(req.reason, mccm::CollectReason::kManual);
    if (req.reason == mccm::CollectReason::kSweep) {
      ++sweeps;
      EXPECT_EQ(req.exec_index % 5, 0u);
    }
  }
  EXPECT_GE(sweeps, 3u);
  EXPECT_LT(log.size(), 23u);
}

TEST_F(TargetTest, MainOnlyNeverCollects) {
  Target t(Config(CampaignMode::kMainOnly));
  for (int i = 0; i < 10; ++i) {
    const auto r = t.Execute(Seq({kValidRegister, kD1Register}));
    for (std::size_t ch = 1; ch < r.collected.size(); ++ch) EXPECT_FALSE(r.collected[ch]);
    for (std::size_t ch = 1; ch < r.record.gains.size(); ++ch)
      EXPECT_EQ(r.record.gains[ch].gain, 0.0);
  }
  for (auto reason : {mccm::CollectReason::kMainNewBits, mccm::CollectReason::kCrash,
                      mccm::CollectReason::kSweep})
    EXPECT_EQ(t.collections(reason), 0u);
}

TEST_F(TargetTest, ReplayOfShippedSeed) {
  Target t(Config());
  const auto seeds = sutsim::ShippedSeedMessages();
  const auto rep = ReplayOnce(t, Seq(seeds[0]));
  EXPECT_EQ(rep.exec.statuses[0], 0x00);
  EXPECT_GT(rep.edges_after[0], rep.edges_before[0]);
  EXPECT_NE(FormatReplay(t, Seq(seeds[0]), rep).find("status 0x00"), std::string::npos);
}

// ---- campaign ----

TEST(Campaign, SmokeWithDefectsOff) {
  const auto dir = FreshDir("smoke");
  auto c = TestConfig(dir);
  c.budget_s = 4;
  const auto result = RunCampaign(c);
  ASSERT_EQ(result.exit_code, kExitOk) << result.message;
  EXPECT_GT(result.execs, 0u);
  EXPECT_TRUE(result.crashes.empty());
  const auto table = ReadStatsCsv(dir / "stats.csv");
  ASSERT_GE(table.rows.size(), 1u);
  EXPECT_GT(table.rows.back()[table.column("edges_ch0")], 0);
  EXPECT_TRUE(CheckStatsInvariants(table).empty());
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "config.effective"));
  fs::remove_all(dir);
}

TEST(Campaign, IdenticalSeedsGiveIdenticalAdmissions) {
  std::string logs[2];
  std::vector<std::pair<ChannelId, uint32_t>> sites[2];
  for (int run = 0; run < 2; ++run) {
    const auto dir = FreshDir("det" + std::to_string(run));
    auto c = TestConfig(dir);
    c.budget_s = 0;
    c.exec_budget = 3000;
    c.timing = TimingMode::kNominal;
    c.sweep_interval = 4;
    c.rng_seed = 77;
    c.defects = sutsim::DefectSet::All();
    const auto result = RunCampaign(c);
    ASSERT_EQ(result.exit_code, kExitOk) << result.message;
    logs[run] = ReadFile(dir / "admissions.log");
    for (const auto& cr : result.crashes) sites[run].push_back({cr.channel, cr.site_id});
    fs::remove_all(dir);
  }
  EXPECT_FALSE(logs[0].empty());
  EXPECT_EQ(logs[0], logs[1]);
  EXPECT_EQ(sites[0], sites[1]);
}

TEST(Campaign, CorpusDirectoryAndBadSeeds) {
  const auto dir = FreshDir("corpus");
  fs::create_directories(dir / "seeds");
  auto c = TestConfig(dir / "out");
  c.corpus_dir = dir / "seeds";
  EXPECT_THROW(LoadInitialCorpus(c), ConfigError);
  WriteSequenceFile(dir / "seeds" / "b.mcsq", Seq({kValidRegister}));
  WriteSequenceFile(dir / "seeds" / "a.mcsq", Seq({kD1Register}));
  const auto seeds = LoadInitialCorpus(c);
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(seeds[0].messages[0], kD1Register);
  std::ofstream(dir / "seeds" / "c.mcsq") << "junk";
  EXPECT_THROW(LoadInitialCorpus(c), ConfigError);
  c.corpus_dir.clear();
  EXPECT_EQ(LoadInitialCorpus(c).size(), 2u);
  fs::remove_all(dir);
}

TEST(Campaign, ConfigErrorsMapToExitCode) {
  CampaignConfig c;
  c.map_size = 3;
  EXPECT_EQ(RunCampaign(c).exit_code, kExitConfig);
  c = CampaignConfig{};
  c.sut_binary = "/nonexistent/mcfuzz-sut";
  c.output_dir = FreshDir("badsut");
  EXPECT_EQ(RunCampaign(c).exit_code, kExitTarget);
  fs::remove_all(c.output_dir);
}

}  // namespace
}  // namespace mcfuzz

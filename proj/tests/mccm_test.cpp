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
#include <signal.h>

#include <thread>

#include "mcfuzz/common/error.hpp"
#include "mcfuzz/common/rng.hpp"
#include "mcfuzz/mccm/collector.hpp"
#include "mcfuzz/mccm/controller.hpp"
#include "mcfuzz/mccm/frame.hpp"
#include "mcfuzz/mccm/launcher.hpp"
#include "mcfuzz/mccm/shared_region.hpp"

namespace mcfuzz::mccm {
namespace {

using namespace std::chrono_literals;

std::string UniqueRegion(const char* tag) {
  static int n = 0;
  return "/mcfuzz-test-" + std::to_string(::getpid()) + "-" + tag + std::to_string(n++);
}

TEST(Frame, HeaderLayout) {
  const Bytes b = EncodeFrame(Frame(MsgType::kNack, Bytes{0x02}));
  const Bytes want = {'M', 'C', 'C', 'M', 0x01, 0x7f, 1, 0, 0, 0, 0x02};
  EXPECT_EQ(b, want);
}

TEST(Frame, RandomRoundTrip) {
  const MsgType types[] = {MsgType::kPing,   MsgType::kCollect,  MsgType::kReset,
                           MsgType::kStatus, MsgType::kNack,     MsgType::kPong,
                           MsgType::kCoverage, MsgType::kAck, MsgType::kStatusReply};
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    Frame f(types[rng.Below(std::size(types))]);
    f.payload.resize(rng.Below(300));
    for (auto& b : f.payload) b = static_cast<uint8_t>(rng.Next());
    const Bytes wire = EncodeFrame(f);
    std::size_t used = 0;
    auto back = DecodeFrame(wire, &used);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, f);
    EXPECT_EQ(used, wire.size());
  }
}

TEST(Frame, PartialAndBadInput) {
  const Bytes wire = EncodeFrame(Frame(MsgType::kCoverage, Bytes(20, 7)));
  std::size_t used = 0;
  for (std::size_t n = 0; n < wire.size(); ++n)
    EXPECT_FALSE(DecodeFrame(ByteView(wire.data(), n), &used).has_value()) << n;
  Bytes bad = wire;
  bad[0] = 'X';
  EXPECT_THROW(DecodeFrame(bad, &used), ProtocolError);
  bad = wire;
  bad[4] = 0x02;
  EXPECT_THROW(DecodeFrame(bad, &used), ProtocolError);
  bad = wire;
  bad[9] = 0x7F;  // payload length far above the limit
  EXPECT_THROW(DecodeFrame(bad, &used), ProtocolError);
  // Unknown types decode; the receiver decides how to answer them.
  bad = wire;
  bad[5] = 0x55;
  auto f = DecodeFrame(bad, &used);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->type, 0x55);
  EXPECT_FALSE(IsKnownType(f->type));
}

TEST(Frame, PayloadCodecs) {
  CoveragePayload c{3, Bytes{0, 1, 2, 7}};
  auto c2 = DecodeCoverage(EncodeCoverage(c));
  EXPECT_EQ(c2.channel, 3u);
  EXPECT_EQ(c2.buckets, c.buckets);
  Bytes short_cov = EncodeCoverage(c);
  short_cov.pop_back();
  EXPECT_THROW(DecodeCoverage(short_cov), ProtocolError);
  StatusPayload s{2, true, 9};
  auto s2 = DecodeStatus(EncodeStatus(s));
  EXPECT_EQ(s2.channel, 2u);
  EXPECT_TRUE(s2.alive);
  EXPECT_EQ(s2.restart_count, 9u);
  EXPECT_EQ(EncodeStatus(s).size(), 9u);
}

TEST(SharedRegion, CreateOpenRecord) {
  const auto name = UniqueRegion("r");
  auto owner = SharedRegion::Create(name, 4, 64);
  EXPECT_EQ(owner.channel(), 4u);
  EXPECT_EQ(owner.size(), 64u);
  for (uint8_t c : owner.cells()) EXPECT_EQ(c, 0);
  auto peer = SharedRegion::Open(name);
  ASSERT_TRUE(peer.has_value());
  for (int i = 0; i < 300; ++i) peer->RecordEdge(7);
  peer->RecordEdge(1);
  EXPECT_EQ(owner.cells()[7], 255);
  EXPECT_EQ(owner.cells()[1], 1);
  const uint32_t g = owner.generation();
  peer->BumpGeneration();
  EXPECT_EQ(owner.generation(), g + 1);
  Bytes snap(64);
  EXPECT_TRUE(owner.Snapshot(snap));
  EXPECT_EQ(snap[7], 255);
  owner.Zero();
  EXPECT_EQ(peer->cells()[7], 0);
  EXPECT_FALSE(SharedRegion::Open(UniqueRegion("none")).has_value());
}

TEST(Collector, HandlesEveryRequestType) {
  const auto name = UniqueRegion("c");
  auto region = SharedRegion::Create(name, 1, 64);
  CollectorOptions o;
  o.region_name = name;
  o.channel = 1;
  Collector col(o);
  EXPECT_EQ(col.Handle(Frame(MsgType::kPing)).msg_type(), MsgType::kPong);
  for (int i = 0; i < 3; ++i) region.RecordEdge(10);
  EXPECT_EQ(col.Handle(Frame(MsgType::kReset)).msg_type(), MsgType::kAck);
  auto cov = col.Handle(Frame(MsgType::kCollect));
  ASSERT_EQ(cov.msg_type(), MsgType::kCoverage);
  auto p = DecodeCoverage(cov.payload);
  EXPECT_EQ(p.channel, 1u);
  EXPECT_EQ(p.buckets, Bytes(64, 0));
  Frame unknown;
  unknown.type = 0x33;
  EXPECT_EQ(col.Handle(unknown), MakeNack(NackCode::kUnknownType));
  EXPECT_EQ(col.Handle(Frame(MsgType::kPong)), MakeNack(NackCode::kUnknownType));
}

TEST(Collector, MissingRegionNacks) {
  CollectorOptions o;
  o.region_name = UniqueRegion("missing");
  Collector col(o);
  EXPECT_EQ(col.Handle(Frame(MsgType::kCollect)), MakeNack(NackCode::kMissingRegion));
  EXPECT_EQ(col.Handle(Frame(MsgType::kReset)), MakeNack(NackCode::kMissingRegion));
}

TEST(Controller, SnapshotFidelityAndMissingChannel) {
  const auto name = UniqueRegion("f");
  auto region = SharedRegion::Create(name, 1, 256);
  Rng rng(5);
  for (int i = 0; i < 400; ++i) region.RecordEdge(static_cast<uint32_t>(rng.Below(256)));
  Bytes expected(region.cells().begin(), region.cells().end());
  for (auto& b : expected) b = BucketOf(b);

  CollectorOptions o;
  o.region_name = name;
  o.channel = 1;
  Collector col(o);
  col.Start();
  Controller ctl({{1, col.endpoint(), name, 500}, {2, {"127.0.0.1", PickFreePort()}, "", 100}});
  auto snaps = ctl.Collect({7, CollectReason::kSweep});
  ASSERT_EQ(snaps.size(), 2u);
  ASSERT_EQ(snaps[0].outcome, CollectOutcome::kOk);
  ASSERT_TRUE(snaps[0].map.has_value());
  EXPECT_TRUE(snaps[0].map->classified());
  EXPECT_TRUE(std::equal(expected.begin(), expected.end(), snaps[0].map->cells().begin()));
  EXPECT_EQ(snaps[1].outcome, CollectOutcome::kMissing);
  EXPECT_FALSE(snaps[1].map.has_value());
  EXPECT_EQ(ctl.missing_total(), 1u);
  EXPECT_EQ(ctl.requests(CollectReason::kSweep), 1u);

  // Reset over the wire, then collect an empty map.
  auto ack = ctl.Exchange(1, Frame(MsgType::kReset));
  ASSERT_TRUE(ack.has_value());
  EXPECT_EQ(ack->msg_type(), MsgType::kAck);
  snaps = ctl.Collect();
  for (uint8_t c : snaps[0].map->cells()) EXPECT_EQ(c, 0);
  col.Stop();
}

LaunchSpec ScriptedSpec(ChannelId ch, std::vector<std::string> args, bool listen = true) {
  LaunchSpec s;
  s.channel = ch;
  s.executable = MCFUZZ_SCRIPTED_COMPONENT;
  s.args = std::move(args);
  s.map_size = 64;
  s.listen_port = listen ? PickFreePort() : 0;
  return s;
}

Socket ConnectTo(const LaunchSpec& s) {
  return ConnectTcp({"127.0.0.1", s.listen_port}, 1000ms);
}

bool Send(const Socket& sock, const Bytes& msg) {
  if (SendMessage(sock.fd(), msg) != IoStatus::kOk) return false;
  Bytes reply;
  return RecvMessage(sock.fd(), reply, Clock::now() + 1s) == IoStatus::kOk;
}

Bytes HitCommand(std::initializer_list<uint32_t> edges) {
  Bytes m = {'h', 'i', 't'};
  for (uint32_t e : edges) PutU32(m, e);
  return m;
}

template <typename Pred>
bool WaitFor(Pred pred, std::chrono::milliseconds limit) {
  const auto end = Clock::now() + limit;
  while (Clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(1ms);
  }
  return pred();
}

TEST(Launcher, SpawnsAliveComponentAndCollectsItsEdges) {
  Launcher l;
  const auto spec = ScriptedSpec(1, {"serve"});
  auto st = l.Spawn(spec);
  EXPECT_TRUE(st.alive);
  EXPECT_EQ(st.restart_count, 0u);
  EXPECT_GT(st.pid, 0);
  Socket s = ConnectTo(spec);
  ASSERT_TRUE(s.valid());
  ASSERT_TRUE(Send(s, HitCommand({5, 5, 9})));
  Controller ctl({l.collector_endpoint(1)});
  auto snaps = ctl.Collect();
  ASSERT_EQ(snaps[0].outcome, CollectOutcome::kOk);
  Bytes want(64, 0);
  want[5] = 2;
  want[9] = 1;
  EXPECT_TRUE(std::equal(want.begin(), want.end(), snaps[0].map->cells().begin()));
  auto status = ctl.Exchange(1, Frame(MsgType::kStatus));
  ASSERT_TRUE(status.has_value());
  auto sp = DecodeStatus(status->payload);
  EXPECT_TRUE(sp.alive);
  EXPECT_EQ(sp.restart_count, 0u);
}

TEST(Launcher, ImmediateExitReportsNotAlive) {
  Launcher l;
  auto st = l.Spawn(ScriptedSpec(1, {"exit", "3"}));
  EXPECT_FALSE(st.alive);
  ASSERT_TRUE(st.last_exit.has_value());
  EXPECT_FALSE(st.last_exit->signaled);
  EXPECT_EQ(st.last_exit->value, 3);
}

TEST(Launcher, ExternalKillDetectedWithinTwoPolls) {
  LauncherOptions opt;
  opt.poll_interval_ms = 50;
  Launcher l(opt);
  const auto st = l.Spawn(ScriptedSpec(1, {"serve"}));
  ASSERT_TRUE(st.alive);
  l.StartMonitor();
  const auto killed_at = Clock::now();
  ::kill(st.pid, SIGKILL);
  std::vector<ComponentEvent> events;
  ASSERT_TRUE(WaitFor(
      [&] {
        auto e = l.DrainEvents();
        events.insert(events.end(), e.begin(), e.end());
        return !events.empty();
      },
      1000ms));
  const auto waited = Clock::now() - killed_at;
  EXPECT_LE(waited, 2 * std::chrono::milliseconds(opt.poll_interval_ms));
  EXPECT_TRUE(events[0].exit.signaled);
  EXPECT_EQ(events[0].exit.value, SIGKILL);
  EXPECT_TRUE(events[0].crash);
  EXPECT_FALSE(events[0].testcase.has_value());
  EXPECT_TRUE(WaitFor([&] { return l.Status(1).restart_count == 1 && l.Status(1).alive; }, 2000ms));
}

TEST(Launcher, CrashDuringTestCaseIsAttributed) {
  Launcher l;
  const auto spec = ScriptedSpec(1, {"serve"});
  ASSERT_TRUE(l.Spawn(spec).alive);
  l.StartMonitor();
  uint32_t seen = 0;
  std::vector<ComponentEvent> events;
  for (uint64_t k = 10; k < 13; ++k) {
    Socket s = ConnectTo(spec);
    ASSERT_TRUE(s.valid());
    l.BeginTestCase(k);
    SendMessage(s.fd(), k == 11 ? Bytes{'a', 'b', 'o', 'r', 't'} : Bytes{'c', 'r', 'a', 's', 'h'});
    ASSERT_TRUE(l.AwaitRestart(1, seen, 3000ms));
    l.EndTestCase();
    seen = l.Status(1).restart_count;
    auto e = l.DrainEvents();
    events.insert(events.end(), e.begin(), e.end());
  }
  EXPECT_EQ(l.Status(1).restart_count, 3u);
  ASSERT_EQ(events.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(events[i].crash);
    ASSERT_TRUE(events[i].testcase.has_value());
    EXPECT_EQ(*events[i].testcase, 10 + i);
  }
  EXPECT_EQ(events[0].exit.value, kCrashExitCode);
  EXPECT_TRUE(events[1].exit.signaled);
  EXPECT_EQ(events[1].exit.value, SIGABRT);
  EXPECT_FALSE(l.storm());
}

TEST(Launcher, CleanExitOutsideTestCaseIsNotACrash) {
  LauncherOptions opt;
  opt.poll_interval_ms = 10;
  Launcher l(opt);
  auto spec = ScriptedSpec(1, {"exit", "0"}, /*listen=*/false);
  l.Spawn(spec);
  l.StartMonitor();
  std::vector<ComponentEvent> events;
  ASSERT_TRUE(WaitFor(
      [&] {
        auto e = l.DrainEvents();
        events.insert(events.end(), e.begin(), e.end());
        return !events.empty();
      },
      1000ms));
  l.StopMonitor();
  EXPECT_FALSE(events[0].crash);
  EXPECT_FALSE(events[0].testcase.has_value());
  EXPECT_EQ(events[0].exit.value, 0);
}

TEST(Launcher, RestartStormIsReported) {
  LauncherOptions opt;
  opt.poll_interval_ms = 5;
  opt.storm_limit = 3;
  opt.storm_window_s = 60;
  Launcher l(opt);
  l.Spawn(ScriptedSpec(1, {"exit", "1"}));
  l.StartMonitor();
  EXPECT_TRUE(WaitFor([&] { return l.storm(); }, 5000ms));
  EXPECT_FALSE(l.storm_diagnostics().empty());
  EXPECT_FALSE(l.AwaitRestart(1, l.Status(1).restart_count, 100ms));
}

TEST(Launcher, DuplicateChannelRejected) {
  Launcher l;
  l.Spawn(ScriptedSpec(1, {"sleep"}, false));
  EXPECT_THROW(l.Spawn(ScriptedSpec(1, {"sleep"}, false)), ConfigError);
}

TEST(Launcher, SleepingComponentThatNeverListensIsKilled) {
  LauncherOptions opt;
  opt.restart_timeout_ms = 200;
  Launcher l(opt);
  auto st = l.Spawn(ScriptedSpec(1, {"sleep"}));
  EXPECT_FALSE(st.alive);
  ASSERT_TRUE(st.last_exit.has_value());
  EXPECT_TRUE(st.last_exit->signaled);
}

}  // namespace
}  // namespace mcfuzz::mccm

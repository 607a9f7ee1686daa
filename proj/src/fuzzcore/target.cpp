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

#include "mcfuzz/fuzzcore/target.hpp"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <thread>

#include "mcfuzz/common/error.hpp"
#include "mcfuzz/sutsim/protocol.hpp"
#include "mcfuzz/sutsim/server.hpp"

namespace mcfuzz {

namespace fs = std::filesystem;

fs::path ResolveSutBinary(const CampaignConfig& config) {
  if (!config.sut_binary.empty()) return config.sut_binary;
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (ec) throw TargetError("cannot locate mcfuzz-sut; set sut_binary in the config");
  return self.parent_path() / "mcfuzz-sut";
}

Target::Target(const CampaignConfig& config)
    : config_(config), main_map_(0, config.map_size) {
  const fs::path exe = ResolveSutBinary(config_);
  if (::access(exe.c_str(), X_OK) != 0)
    throw TargetError("component executable " + exe.string() + " is not executable");
  fs::create_directories(config_.crash_dir);

  mccm::LauncherOptions lo;
  lo.poll_interval_ms = config_.poll_interval_ms;
  lo.restart_timeout_ms = config_.restart_timeout_ms;
  lo.storm_limit = config_.storm_limit;
  lo.storm_window_s = config_.storm_window_s;
  launcher_ = std::make_unique<mccm::Launcher>(lo);

  const std::size_t n = config_.channel_count();
  std::vector<sutsim::Role> roles = {sutsim::Role::kEntry};
  roles.insert(roles.end(), config_.downstreams.begin(), config_.downstreams.end());
  std::vector<uint16_t> ports(n);
  for (std::size_t ch = 0; ch < n; ++ch) {
    names_.emplace_back(sutsim::RoleName(roles[ch]));
    crash_logs_.push_back(config_.crash_dir / ("crash-" + names_.back() + ".log"));
    std::error_code ec;
    const auto size = fs::file_size(crash_logs_.back(), ec);
    crash_log_offsets_.push_back(ec ? 0 : size);
    ports[ch] = PickFreePort();
  }

  auto spawn = [&](ChannelId ch, std::vector<std::string> extra) {
    mccm::LaunchSpec spec;
    spec.channel = ch;
    spec.name = names_[ch];
    spec.executable = exe.string();
    spec.args = {"--role", names_[ch], "--crash-log", crash_logs_[ch].string()};
    spec.args.insert(spec.args.end(), extra.begin(), extra.end());
    spec.map_size = config_.map_size;
    spec.listen_port = ports[ch];
    spec.collector_timeout_ms = config_.collector_timeout_ms;
    spec.output_path = (config_.crash_dir / "components.log").string();
    const mccm::ComponentStatus st = launcher_->Spawn(spec);
    if (!st.alive)
      throw TargetError("component " + names_[ch] + " failed to start" +
                        (st.last_exit ? " (" + st.last_exit->ToString() + ")" : ""));
  };
  // Downstreams first so the entry can reach them from its first message.
  for (ChannelId ch = 1; ch < n; ++ch) spawn(ch, {});
  std::vector<std::string> entry_args = {
      "--defects", config_.defects.ToString(), "--downstream-deadline-ms",
      std::to_string(config_.downstream_deadline_ms)};
  for (ChannelId ch = 1; ch < n; ++ch) {
    entry_args.push_back("--" + names_[ch]);
    entry_args.push_back("127.0.0.1:" + std::to_string(ports[ch]));
  }
  spawn(0, entry_args);
  entry_ = Endpoint{"127.0.0.1", ports[0]};

  std::vector<mccm::CollectorEndpoint> endpoints;
  for (ChannelId ch = 0; ch < n; ++ch) {
    regions_.push_back(&launcher_->region(ch));
    virgins_.emplace_back(ch, config_.map_size);
    seen_restarts_.push_back(0);
    if (ch > 0) endpoints.push_back(launcher_->collector_endpoint(ch));
  }
  controller_ = std::make_unique<mccm::Controller>(std::move(endpoints));
  launcher_->StartMonitor();
  if (!Connect()) throw TargetError("cannot connect to the entry component at " + entry_.ToString());
}

Target::~Target() {
  conn_.Close();
  launcher_.reset();
}

bool Target::Connect() {
  conn_ = ConnectTcp(entry_, std::chrono::milliseconds(config_.restart_timeout_ms));
  return conn_.valid();
}

uint32_t Target::restarts() const {
  uint32_t total = 0;
  for (ChannelId ch = 0; ch < virgins_.size(); ++ch) total += launcher_->Status(ch).restart_count;
  return total;
}

uint32_t Target::LookupSite(ChannelId ch, uint64_t token, std::string* component) {
  std::ifstream in(crash_logs_[ch], std::ios::binary);
  if (!in) return 0;
  in.seekg(static_cast<std::streamoff>(crash_log_offsets_[ch]));
  std::string line;
  std::optional<sutsim::CrashLineFields> match, last;
  uint64_t consumed = crash_log_offsets_[ch];
  while (std::getline(in, line)) {
    if (in.eof()) break;  // partial line; leave it for the next read
    consumed += line.size() + 1;
    const auto f = sutsim::ParseCrashLine(line);
    if (!f) continue;
    last = f;
    if (f->token == token) match = f;
  }
  crash_log_offsets_[ch] = consumed;
  const auto& pick = match ? match : last;
  if (!pick) return 0;
  *component = pick->component;
  return pick->site_id;
}

std::vector<CrashObservation> Target::DrainCrashes() {
  std::vector<CrashObservation> out;
  for (const mccm::ComponentEvent& ev : launcher_->DrainEvents()) {
    if (!ev.crash) continue;
    CrashObservation obs;
    obs.channel = ev.channel;
    obs.component = names_.at(ev.channel);
    obs.testcase = ev.testcase.value_or(0);
    obs.exit = ev.exit;
    obs.site_id = LookupSite(ev.channel, obs.testcase, &obs.component);
    out.push_back(std::move(obs));
  }
  return out;
}

ExecResult Target::Execute(const MessageSequence& seq, CollectPolicy policy) {
  const std::size_t n = virgins_.size();
  const bool multi = config_.mode == CampaignMode::kMulti;
  const bool all = policy == CollectPolicy::kAll;
  ExecResult r;
  r.testcase = next_testcase_++;
  r.collected.assign(n, false);
  for (ChannelId ch = 0; ch < n; ++ch) r.record.gains.push_back(ChannelGain{ch, 0, 0.0});

  regions_[0]->Zero();
  if (multi || all)
    for (std::size_t ch = 1; ch < n; ++ch) regions_[ch]->Zero();

  launcher_->BeginTestCase(r.testcase);
  const auto timeout = std::chrono::milliseconds(config_.message_timeout_ms);
  bool lost = !conn_.valid() && !Connect();
  Bytes reply;
  if (!lost) {
    IoStatus st = SendMessage(conn_.fd(), sutsim::MakeResetMessage(r.testcase));
    if (st == IoStatus::kOk) st = RecvMessage(conn_.fd(), reply, Clock::now() + timeout);
    if (st == IoStatus::kTimeout) {
      r.hang = true;
      conn_.Close();
    } else if (st != IoStatus::kOk) {
      lost = true;
    }
  }
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < seq.messages.size() && !lost && !r.hang; ++i) {
    IoStatus st = SendMessage(conn_.fd(), seq.messages[i]);
    if (st == IoStatus::kOk) st = RecvMessage(conn_.fd(), reply, Clock::now() + timeout);
    if (st == IoStatus::kOk) {
      r.statuses.push_back(reply.size() > sutsim::kTlvHeaderSize
                               ? std::optional<uint8_t>(reply[sutsim::kTlvHeaderSize])
                               : std::nullopt);
    } else if (st == IoStatus::kTimeout) {
      r.statuses.push_back(std::nullopt);
      r.hang = true;
      r.note = "reply timeout on message " + std::to_string(i);
      // A late reply would desynchronize the stream.
      conn_.Close();
    } else {
      r.statuses.push_back(std::nullopt);
      lost = true;
    }
  }
  const double wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
  launcher_->EndTestCase();
  r.record.exec_time_s = config_.timing == TimingMode::kNominal
                             ? 1e-3 * static_cast<double>(seq.messages.size())
                             : wall_s;

  if (lost) {
    conn_.Close();
    const bool back = launcher_->AwaitRestart(
        0, seen_restarts_[0], std::chrono::milliseconds(config_.restart_timeout_ms + 1000));
    if (launcher_->storm()) throw RestartStormError(launcher_->storm_diagnostics());
    const mccm::ComponentStatus st = launcher_->Status(0);
    if (!back && !st.alive)
      throw TargetError("entry component did not restart" +
                        (st.last_exit ? " (" + st.last_exit->ToString() + ")" : ""));
    seen_restarts_[0] = st.restart_count;
    Connect();
  }
  r.crashes = DrainCrashes();
  if (launcher_->storm()) throw RestartStormError(launcher_->storm_diagnostics());
  if (lost && r.crashes.empty()) {
    r.invalid = true;
    r.note = "connection to the entry lost without a crash";
    return r;
  }

  // Main channel: read straight from the region the launcher holds.
  SnapshotReset(main_map_);
  regions_[0]->Snapshot(main_map_.cells());
  ClassifyCounts(main_map_);
  const NewBitsResult main_bits = HasNewBits(main_map_, virgins_[0]);
  r.collected[0] = true;
  r.record.gains[0] = main_bits.gain;
  if (main_bits.novel) r.novel_channels.push_back(0);

  if (n > 1) {
    if (all) r.collect_reason = mccm::CollectReason::kManual;
    else if (multi && !r.crashes.empty()) r.collect_reason = mccm::CollectReason::kCrash;
    else if (multi && main_bits.novel) r.collect_reason = mccm::CollectReason::kMainNewBits;
    else if (multi && config_.sweep_interval > 0 && r.testcase % config_.sweep_interval == 0)
      r.collect_reason = mccm::CollectReason::kSweep;
  }
  if (r.collect_reason) {
    if (config_.settle_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(config_.settle_ms));
    for (mccm::ChannelSnapshot& snap : controller_->Collect({r.testcase, *r.collect_reason})) {
      if (snap.outcome != mccm::CollectOutcome::kOk) {
        ++r.missing_channels;
        continue;
      }
      const NewBitsResult bits = HasNewBits(*snap.map, virgins_.at(snap.channel));
      r.collected[snap.channel] = true;
      r.record.gains[snap.channel] = bits.gain;
      if (bits.novel) r.novel_channels.push_back(snap.channel);
    }
  }
  return r;
}

}  // namespace mcfuzz

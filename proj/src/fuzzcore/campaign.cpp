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

#include "mcfuzz/fuzzcore/campaign.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "mcfuzz/common/error.hpp"
#include "mcfuzz/mutation/corpus_io.hpp"
#include "mcfuzz/sutsim/protocol.hpp"

namespace mcfuzz {

namespace fs = std::filesystem;

namespace {

uint64_t Fnv1a(ByteView data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string SeedFileName(uint64_t id, std::optional<uint64_t> parent) {
  char buf[64];
  if (parent)
    std::snprintf(buf, sizeof(buf), "id-%06llu-src-%06llu.mcsq", static_cast<unsigned long long>(id),
                  static_cast<unsigned long long>(*parent));
  else
    std::snprintf(buf, sizeof(buf), "id-%06llu-init.mcsq", static_cast<unsigned long long>(id));
  return buf;
}

std::string JoinChannels(const std::vector<ChannelId>& chs) {
  std::string out;
  for (ChannelId c : chs) out += (out.empty() ? "" : ",") + std::to_string(c);
  return out.empty() ? "-" : out;
}

}  // namespace

std::vector<MessageSequence> LoadInitialCorpus(const CampaignConfig& config) {
  std::vector<MessageSequence> out;
  if (config.corpus_dir.empty()) {
    const char* names[] = {"builtin-register", "builtin-register-setup"};
    std::size_t i = 0;
    for (auto& messages : sutsim::ShippedSeedMessages()) {
      MessageSequence seq;
      seq.messages = std::move(messages);
      seq.origin = names[i++ % 2];
      out.push_back(std::move(seq));
    }
    return out;
  }
  if (!fs::is_directory(config.corpus_dir))
    throw ConfigError("corpus_dir " + config.corpus_dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(config.corpus_dir))
    if (e.is_regular_file() && e.path().extension() == ".mcsq") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      out.push_back(ReadSequenceFile(f));
    } catch (const ParseError& e) {
      throw ConfigError("initial corpus file " + f.string() + ": " + e.what());
    }
  }
  if (out.empty())
    throw ConfigError("corpus_dir " + config.corpus_dir.string() + " has no .mcsq files");
  return out;
}

Campaign::Campaign(CampaignConfig config, const std::atomic<bool>* stop)
    : config_(std::move(config)),
      stop_(stop),
      mutator_(MutatorOptions{kMaxMessages, kMaxMessageLen, 4, 0.2}),
      scheduler_(0.75),
      schedule_rng_(0) {
  config_.Finalize();
  weights_ = config_.weights();
  energy_ = config_.energy_policy();
  mutator_ = Mutator(MutatorOptions{kMaxMessages, kMaxMessageLen, config_.max_stack,
                                    config_.splice_probability});
  scheduler_ = SeedScheduler(config_.p_skip);
  schedule_rng_ = Rng(MixSeed(config_.rng_seed, ~0ULL));
}

double Campaign::Now() const {
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

bool Campaign::Done() const {
  if (stop_ && stop_->load(std::memory_order_relaxed)) return true;
  if (config_.exec_budget > 0 && execs_ >= config_.exec_budget) return true;
  return config_.budget_s > 0 && Now() >= config_.budget_s;
}

CampaignResult Campaign::Run() {
  fs::create_directories(config_.output_dir);
  fs::create_directories(config_.queue_dir);
  const std::size_t n = config_.channel_count();
  stats_ = std::make_unique<StatsWriter>(config_.stats_file, n);
  crashes_ = std::make_unique<CrashTable>(config_.crash_dir);
  admissions_.open(config_.output_dir / "admissions.log", std::ios::trunc);
  if (!admissions_) throw ConfigError("cannot write to " + config_.output_dir.string());
  {
    std::ofstream dump(config_.output_dir / "config.effective");
    dump << DumpConfig(config_);
  }

  target_ = std::make_unique<Target>(config_);
  start_ = Clock::now();
  last_row_edges_.assign(n, 0);

  Calibrate();
  while (!Done()) FuzzOne();
  MaybeEmitStats(/*final_row=*/true);

  CampaignResult result;
  result.execs = execs_;
  result.messages = messages_;
  result.elapsed_s = Now();
  result.corpus = queue_.size();
  for (ChannelId ch = 0; ch < n; ++ch) result.edges.push_back(target_->virgin(ch).covered_edges());
  result.crashes = crashes_->records();
  result.message = "budget reached";
  if (stop_ && stop_->load()) result.message = "stopped";
  WriteSummary(result);
  return result;
}

void Campaign::Calibrate() {
  for (const MessageSequence& seq : LoadInitialCorpus(config_)) {
    if (Done()) break;
    const ExecResult r = target_->Execute(seq);
    Handle(r, seq, std::nullopt, /*initial=*/true);
  }
  if (queue_.empty()) throw ConfigError("no initial seed executed cleanly");
  RefreshEnergy();
}

void Campaign::RefreshEnergy() {
  std::vector<double> scores;
  scores.reserve(queue_.size());
  for (const Seed& s : queue_) scores.push_back(s.score.s);
  energy_.s_ref = ReferenceScore(scores, config_.reference_quantile);
  for (Seed& s : queue_) s.energy = AssignEnergy(s.score.s, energy_);
}

void Campaign::FuzzOne() {
  const SeedScheduler::Pick pick = scheduler_.Next(
      queue_.size(), [this](std::size_t i) { return queue_[i].favored; }, schedule_rng_);
  if (pick.new_cycle) RefreshEnergy();
  const std::size_t idx = pick.index;
  const uint32_t energy = AssignEnergy(queue_[idx].score.s, energy_);
  queue_[idx].energy = energy;
  const uint64_t seed_id = queue_[idx].id;

  // The stream keeps a view of the donors, and admissions may grow the
  // queue during the visit, so it works on a copy.
  std::vector<MessageSequence> donors;
  donors.reserve(queue_.size());
  for (const Seed& s : queue_) donors.push_back(s.sequence);
  MutantStream stream(mutator_, queue_[idx].sequence, {energy, MixSeed(config_.rng_seed, visits_++)},
                      donors);
  const std::size_t before = queue_.size();
  uint32_t executed = 0;
  MessageSequence mutant;
  while (!Done() && stream.Next(mutant)) {
    const ExecResult r = target_->Execute(mutant);
    ++executed;
    Handle(r, mutant, seed_id, /*initial=*/false);
  }
  unspent_energy_ += energy - executed;
  queue_[idx].favored = queue_.size() > before;
}

void Campaign::Handle(const ExecResult& r, const MessageSequence& seq,
                      std::optional<uint64_t> parent, bool initial) {
  ++execs_;
  messages_ += seq.messages.size();
  bool crashed_here = false;
  for (const CrashObservation& obs : r.crashes) {
    // Crash events that arrive between test cases belong to the previous one.
    const bool previous = obs.testcase == last_testcase_ && obs.testcase != r.testcase;
    crashed_here |= !previous;
    crashes_->Add(obs.channel, obs.component, obs.site_id, obs.testcase ? obs.testcase : r.testcase,
                  Now(), previous ? last_sequence_ : seq);
  }
  if (r.invalid) {
    ++invalid_;
  } else {
    if (r.hang) ++hangs_;
    // Crashing inputs go to the crash table only; keeping them in the queue
    // would make most of their mutants crash again.
    if (!crashed_here && (initial || r.novel())) Admit(r, seq, parent, initial);
  }
  last_testcase_ = r.testcase;
  last_sequence_ = seq;
  MaybeEmitStats(/*final_row=*/false);
}

void Campaign::Admit(const ExecResult& r, const MessageSequence& seq,
                     std::optional<uint64_t> parent, bool initial) {
  Seed s;
  s.id = queue_.size();
  s.sequence = seq;
  s.sequence.origin = SeedFileName(s.id, parent);
  s.exec_record = r.record;
  s.score = Score(r.record, weights_, config_.time_floor_s);
  s.energy = AssignEnergy(s.score.s, energy_);
  s.discovered_at = Now();
  s.parent_id = parent;
  s.testcase = r.testcase;
  s.novel_channels = r.novel_channels;
  WriteSequenceFile(config_.queue_dir / s.sequence.origin, s.sequence);

  const Bytes bytes = SerializeCorpus(s.sequence);
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(Fnv1a(bytes)));
  admissions_ << s.id << ' ' << (parent ? std::to_string(*parent) : std::string(initial ? "init" : "-"))
              << ' ' << r.testcase << ' ' << JoinChannels(r.novel_channels) << ' ' << hash << '\n'
              << std::flush;
  queue_.push_back(std::move(s));
}

void Campaign::MaybeEmitStats(bool final_row) {
  const double t = Now();
  if (!final_row && t < last_row_t_ + config_.stats_interval_s) return;
  if (execs_ <= last_row_execs_ || t <= last_row_t_) return;
  const std::size_t n = config_.channel_count();
  const double dt = t - last_row_t_;
  StatsRow row;
  row.elapsed_s = t;
  row.execs = execs_;
  row.execs_per_s = static_cast<double>(execs_ - last_row_execs_) / dt;
  for (ChannelId ch = 0; ch < n; ++ch) {
    const std::size_t e = target_->virgin(ch).covered_edges();
    row.edges.push_back(e);
    row.rates.push_back(static_cast<double>(e - last_row_edges_[ch]) / dt);
    last_row_edges_[ch] = e;
  }
  row.corpus = queue_.size();
  row.unique_crashes = crashes_->unique();
  row.total_crashes = crashes_->total();
  stats_->Append(row);
  last_row_t_ = t;
  last_row_execs_ = execs_;
}

void Campaign::WriteSummary(const CampaignResult& result) const {
  using nlohmann::json;
  json j;
  j["mode"] = ModeName(config_.mode);
  j["rng_seed"] = config_.rng_seed;
  j["budget_s"] = config_.budget_s;
  j["exec_budget"] = config_.exec_budget;
  j["defects"] = config_.defects.ToString();
  j["elapsed_s"] = result.elapsed_s;
  j["execs"] = result.execs;
  j["execs_per_s"] = result.elapsed_s > 0 ? static_cast<double>(result.execs) / result.elapsed_s : 0.0;
  j["messages"] = result.messages;
  j["messages_per_s"] =
      result.elapsed_s > 0 ? static_cast<double>(result.messages) / result.elapsed_s : 0.0;
  j["invalid"] = invalid_;
  j["hangs"] = hangs_;
  j["visits"] = visits_;
  j["unspent_energy"] = unspent_energy_;
  j["corpus"] = result.corpus;
  j["restarts"] = target_->restarts();
  j["message"] = result.message;
  json channels = json::array();
  for (ChannelId ch = 0; ch < config_.channel_count(); ++ch)
    channels.push_back({{"id", ch},
                        {"name", target_->channel_name(ch)},
                        {"covered_edges", result.edges[ch]}});
  j["channels"] = channels;
  j["collections"] = {
      {"main_new_bits", target_->collections(mccm::CollectReason::kMainNewBits)},
      {"crash", target_->collections(mccm::CollectReason::kCrash)},
      {"sweep", target_->collections(mccm::CollectReason::kSweep)},
      {"manual", target_->collections(mccm::CollectReason::kManual)},
      {"missing_channels", target_->missing_total()}};
  json crashes = json::array();
  for (const CrashRecord& c : result.crashes)
    crashes.push_back({{"defect", DefectLabel(c.site_id)},
                       {"channel", c.channel},
                       {"component", c.component},
                       {"site_id", c.site_id},
                       {"first_seen_s", c.first_seen_s},
                       {"first_testcase", c.first_testcase},
                       {"count", c.count},
                       {"witness", c.witness.string()}});
  j["crashes"] = crashes;
  std::ofstream out(config_.output_dir / "summary.json");
  out << j.dump(2) << '\n';
}

CampaignResult RunCampaign(const CampaignConfig& config, const std::atomic<bool>* stop) {
  CampaignResult result;
  try {
    Campaign campaign(config, stop);
    return campaign.Run();
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.message = std::string("config error: ") + e.what();
  } catch (const ParseError& e) {
    result.exit_code = kExitConfig;
    result.message = std::string("parse error: ") + e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitConfig;
    result.message = std::string("filesystem error: ") + e.what();
  } catch (const RestartStormError& e) {
    result.exit_code = kExitStorm;
    result.message = std::string("restart storm: ") + e.what();
  } catch (const TargetError& e) {
    result.exit_code = kExitTarget;
    result.message = std::string("target failure: ") + e.what();
  }
  std::cerr << "mcfuzz: " << result.message << '\n';
  return result;
}

ReplayReport ReplayOnce(Target& target, const MessageSequence& seq) {
  ReplayReport report;
  for (ChannelId ch = 0; ch < target.channel_count(); ++ch)
    report.edges_before.push_back(target.virgin(ch).covered_edges());
  report.exec = target.Execute(seq, CollectPolicy::kAll);
  for (ChannelId ch = 0; ch < target.channel_count(); ++ch)
    report.edges_after.push_back(target.virgin(ch).covered_edges());
  return report;
}

std::string FormatReplay(const Target& target, const MessageSequence& seq, const ReplayReport& r) {
  std::ostringstream out;
  char buf[160];
  for (std::size_t i = 0; i < seq.messages.size(); ++i) {
    const Bytes& m = seq.messages[i];
    const int type = m.empty() ? -1 : m[0];
    if (i < r.exec.statuses.size() && r.exec.statuses[i]) {
      const uint8_t st = *r.exec.statuses[i];
      std::snprintf(buf, sizeof(buf), "message %zu: type 0x%02x, %zu bytes -> status 0x%02x (%s)\n", i,
                    type, m.size(), st, std::string(sutsim::StatusName(st)).c_str());
    } else if (i < r.exec.statuses.size()) {
      std::snprintf(buf, sizeof(buf), "message %zu: type 0x%02x, %zu bytes -> no reply\n", i, type,
                    m.size());
    } else {
      std::snprintf(buf, sizeof(buf), "message %zu: type 0x%02x, %zu bytes -> not sent\n", i, type,
                    m.size());
    }
    out << buf;
  }
  for (ChannelId ch = 0; ch < target.channel_count(); ++ch) {
    std::snprintf(buf, sizeof(buf), "channel %u (%s): +%zu edges%s\n", ch,
                  target.channel_name(ch).c_str(), r.edges_after[ch] - r.edges_before[ch],
                  r.exec.collected[ch] ? "" : " (not collected)");
    out << buf;
  }
  if (r.exec.crashes.empty()) {
    out << "crash: none\n";
  } else {
    for (const CrashObservation& c : r.exec.crashes) {
      const std::string defect = DefectLabel(c.site_id);
      out << "crash: " << c.component << " site " << c.site_id
          << (defect.empty() ? "" : " (" + defect + ")") << ", " << c.exit.ToString() << '\n';
    }
  }
  if (r.exec.hang) out << "hang: " << r.exec.note << '\n';
  if (r.exec.invalid) out << "invalid: " << r.exec.note << '\n';
  return out.str();
}

}  // namespace mcfuzz

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

#include "mcfuzz/fuzzcore/triage.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mcfuzz/common/error.hpp"
#include "mcfuzz/mutation/corpus_io.hpp"
#include "mcfuzz/sutsim/components.hpp"
#include "mcfuzz/sutsim/server.hpp"

namespace mcfuzz {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEventsHeader = "elapsed_s\ttestcase\tchannel\tcomponent\tsite_id";

fs::path WitnessPath(const fs::path& dir, const std::string& component, uint32_t site) {
  return dir / ("witness-" + component + "-site" + std::to_string(site) + ".mcsq");
}

bool ByDiscovery(const CrashRecord& a, const CrashRecord& b) {
  if (a.first_seen_s != b.first_seen_s) return a.first_seen_s < b.first_seen_s;
  return std::tie(a.channel, a.site_id) < std::tie(b.channel, b.site_id);
}

}  // namespace

std::string DefectLabel(uint32_t site_id) {
  switch (site_id) {
    case sutsim::kD1Site: return "D1";
    case sutsim::kD2Site: return "D2";
    case sutsim::kD3Site: return "D3";
    default: return "";
  }
}

CrashTable::CrashTable(fs::path crash_dir) : dir_(std::move(crash_dir)) {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  const fs::path events = dir_ / "events.tsv";
  if (!fs::exists(events)) {
    std::ofstream out(events);
    out << kEventsHeader << '\n';
    if (!out) throw TargetError("cannot write " + events.string());
  }
}

bool CrashTable::Add(ChannelId channel, const std::string& component, uint32_t site_id,
                     uint64_t testcase, double at_s, const MessageSequence& witness) {
  ++total_;
  if (!dir_.empty()) {
    std::ofstream out(dir_ / "events.tsv", std::ios::app);
    out << std::fixed << std::setprecision(3) << at_s << '\t' << testcase << '\t' << channel << '\t' << component << '\t' << site_id
        << '\n';
  }
  auto [it, inserted] = records_.try_emplace({channel, site_id});
  CrashRecord& rec = it->second;
  ++rec.count;
  if (!inserted) return false;
  rec.channel = channel;
  rec.component = component;
  rec.site_id = site_id;
  rec.first_seen_s = at_s;
  rec.first_testcase = testcase;
  if (!dir_.empty()) {
    rec.witness = WitnessPath(dir_, component, site_id);
    WriteSequenceFile(rec.witness, witness);
  }
  return true;
}

std::vector<CrashRecord> CrashTable::records() const {
  std::vector<CrashRecord> out;
  for (const auto& [key, rec] : records_) out.push_back(rec);
  std::sort(out.begin(), out.end(), ByDiscovery);
  return out;
}

const CrashRecord* CrashTable::Find(ChannelId channel, uint32_t site_id) const {
  const auto it = records_.find({channel, site_id});
  return it == records_.end() ? nullptr : &it->second;
}

TriageReport TriageDirectory(const fs::path& crash_dir) {
  if (!fs::is_directory(crash_dir))
    throw ConfigError("crash directory " + crash_dir.string() + " does not exist");
  TriageReport report;

  // testcase token -> (elapsed, channel) from the campaign's event log.
  std::map<uint64_t, std::pair<double, ChannelId>> when;
  std::map<std::string, ChannelId> channel_of;
  if (std::ifstream events(crash_dir / "events.tsv"); events) {
    std::string line;
    int lineno = 0;
    while (std::getline(events, line)) {
      if (++lineno == 1 || line.empty()) continue;
      std::istringstream in(line);
      double at = 0;
      uint64_t testcase = 0;
      ChannelId ch = 0;
      std::string component;
      uint32_t site = 0;
      if (!(in >> at >> testcase >> ch >> component >> site)) {
        report.warnings.push_back("events.tsv line " + std::to_string(lineno) + ": malformed");
        continue;
      }
      when.try_emplace(testcase, at, ch);
      channel_of.try_emplace(component, ch);
    }
  }

  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(crash_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("crash-", 0) == 0 && entry.path().extension() == ".log")
      logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());

  std::map<std::pair<std::string, uint32_t>, CrashRecord> table;
  for (const fs::path& log : logs) {
    std::ifstream in(log);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = sutsim::ParseCrashLine(line);
      if (!f) {
        report.warnings.push_back(log.filename().string() + ":" + std::to_string(lineno) +
                                  ": malformed crash line skipped: " + line);
        continue;
      }
      auto [it, inserted] = table.try_emplace({f->component, f->site_id});
      CrashRecord& rec = it->second;
      if (inserted) {
        rec.component = f->component;
        rec.site_id = f->site_id;
        rec.first_seen_s = std::numeric_limits<double>::infinity();
        const auto ch = channel_of.find(f->component);
        if (ch != channel_of.end()) rec.channel = ch->second;
        const fs::path witness = WitnessPath(crash_dir, f->component, f->site_id);
        if (fs::exists(witness)) rec.witness = witness;
      }
      ++rec.count;
      const auto w = when.find(f->token);
      if (w != when.end() && w->second.first < rec.first_seen_s) {
        rec.first_seen_s = w->second.first;
        rec.first_testcase = f->token;
      }
    }
  }
  for (auto& [key, rec] : table) report.records.push_back(rec);
  std::sort(report.records.begin(), report.records.end(), ByDiscovery);
  return report;
}

std::string FormatTriageTable(const std::vector<CrashRecord>& records) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-6s %-10s %8s %8s %12s  %s\n", "defect", "component", "site",
                "count", "first_seen_s", "witness");
  out << buf;
  for (const CrashRecord& r : records) {
    const std::string defect = DefectLabel(r.site_id);
    char seen[32];
    if (r.first_seen_s == std::numeric_limits<double>::infinity())
      std::snprintf(seen, sizeof(seen), "?");
    else
      std::snprintf(seen, sizeof(seen), "%.3f", r.first_seen_s);
    std::snprintf(buf, sizeof(buf), "%-6s %-10s %8u %8llu %12s  %s\n",
                  defect.empty() ? "-" : defect.c_str(), r.component.c_str(), r.site_id,
                  static_cast<unsigned long long>(r.count), seen,
                  r.witness.empty() ? "-" : r.witness.filename().c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace mcfuzz

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

#include "mcfuzz/fuzzcore/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(const std::string& key, const std::string& value, const char* want) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as " + want);
}

uint64_t ToU64(const std::string& key, const std::string& v) {
  uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) Bad(key, v, "an unsigned integer");
  return out;
}

int ToInt(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) Bad(key, v, "an integer");
  return out;
}

double ToDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) Bad(key, v, "a number");
    return d;
  } catch (const std::logic_error&) {
    Bad(key, v, "a number");
  }
}

std::filesystem::path ToPath(const std::string& v, const std::filesystem::path& base) {
  if (v.empty()) return {};
  std::filesystem::path p(v);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string JoinDoubles(const std::vector<double>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

std::string Num(double d) {
  std::ostringstream out;
  out << d;
  return out.str();
}

using Setter = std::function<void(CampaignConfig&, const std::string&, const std::string&,
                                  const std::filesystem::path&)>;
using Getter = std::function<std::string(const CampaignConfig&)>;

struct KeyEntry {
  ConfigKeyDoc doc;
  Setter set;
  Getter get;
};

#define U64_KEY(field)                                                                    \
  [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {        \
    c.field = ToU64(k, v);                                                                \
  },                                                                                      \
      [](const CampaignConfig& c) { return std::to_string(c.field); }
#define U32_KEY(field)                                                                    \
  [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {        \
    const uint64_t x = ToU64(k, v);                                                       \
    if (x > UINT32_MAX) Bad(k, v, "a 32-bit unsigned integer");                           \
    c.field = static_cast<uint32_t>(x);                                                   \
  },                                                                                      \
      [](const CampaignConfig& c) { return std::to_string(c.field); }
#define INT_KEY(field)                                                                    \
  [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {        \
    c.field = ToInt(k, v);                                                                \
  },                                                                                      \
      [](const CampaignConfig& c) { return std::to_string(c.field); }
#define DOUBLE_KEY(field)                                                                 \
  [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {        \
    c.field = ToDouble(k, v);                                                             \
  },                                                                                      \
      [](const CampaignConfig& c) { return Num(c.field); }
#define PATH_KEY(field)                                                                   \
  [](CampaignConfig& c, const std::string&, const std::string& v,                         \
     const std::filesystem::path& base) { c.field = ToPath(v, base); },                   \
      [](const CampaignConfig& c) { return c.field.string(); }

const std::vector<KeyEntry>& Keys() {
  static const std::vector<KeyEntry> keys = {
      {{"mode", "multi", "multi: collect every channel; main-only: entry coverage only"},
       [](CampaignConfig& c, const std::string&, const std::string& v, const auto&) {
         c.mode = ParseMode(v);
       },
       [](const CampaignConfig& c) { return std::string(ModeName(c.mode)); }},
      {{"budget_s", "600", "wall-clock budget in seconds (0: unlimited)"}, DOUBLE_KEY(budget_s)},
      {{"exec_budget", "0", "stop after this many executions (0: unlimited)"},
       U64_KEY(exec_budget)},
      {{"rng_seed", "1", "seed of every random stream in the campaign"}, U64_KEY(rng_seed)},
      {{"timing", "wall",
        "wall: T is measured; nominal: T = 1 ms per message, for reproducible scores"},
       [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {
         if (v == "wall") c.timing = TimingMode::kWall;
         else if (v == "nominal") c.timing = TimingMode::kNominal;
         else Bad(k, v, "wall or nominal");
       },
       [](const CampaignConfig& c) {
         return std::string(c.timing == TimingMode::kWall ? "wall" : "nominal");
       }},
      {{"sut_binary", "", "component executable (default: mcfuzz-sut next to mcfuzz)"},
       PATH_KEY(sut_binary)},
      {{"downstreams", "smf,nrf,upf", "downstream components, one channel each, in order"},
       [](CampaignConfig& c, const std::string&, const std::string& v, const auto&) {
         c.downstreams.clear();
         if (v == "none") return;
         for (const auto& r : SplitList(v)) c.downstreams.push_back(sutsim::ParseRole(r));
       },
       [](const CampaignConfig& c) {
         std::string out;
         for (auto r : c.downstreams) out += (out.empty() ? "" : ",") + std::string(sutsim::RoleName(r));
         return out.empty() ? std::string("none") : out;
       }},
      {{"defects", "none", "planted defects enabled in the target: D1,D2,D3, all or none"},
       [](CampaignConfig& c, const std::string&, const std::string& v, const auto&) {
         c.defects = sutsim::DefectSet::Parse(v);
       },
       [](const CampaignConfig& c) { return c.defects.ToString(); }},
      {{"map_size", "65536", "coverage map cells per channel (power of two, >= 256)"},
       U64_KEY(map_size)},
      {{"downstream_deadline_ms", "100", "entry-to-downstream request deadline"},
       INT_KEY(downstream_deadline_ms)},
      {{"sweep_interval", "100", "collect every channel every K executions (0: off)"},
       U64_KEY(sweep_interval)},
      {{"settle_ms", "20", "pause between the last reply and a collection"}, INT_KEY(settle_ms)},
      {{"message_timeout_ms", "200", "per-message reply timeout; expiry marks a hang"},
       INT_KEY(message_timeout_ms)},
      {{"collector_timeout_ms", "500", "per-request collector deadline"},
       INT_KEY(collector_timeout_ms)},
      {{"w1", "0.7", "weight of the coverage reward"}, DOUBLE_KEY(w1)},
      {{"w2", "0.3", "weight of the efficiency reward"}, DOUBLE_KEY(w2)},
      {{"beta", "0.1", "scale of the efficiency reward"}, DOUBLE_KEY(beta)},
      {{"alphas", "", "per-channel coverage weights (default: 0.4 main, 0.6 shared)"},
       [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {
         c.alphas.clear();
         for (const auto& a : SplitList(v)) c.alphas.push_back(ToDouble(k, a));
       },
       [](const CampaignConfig& c) { return JoinDoubles(c.alphas); }},
      {{"e_min", "16", "energy of a zero-score seed"}, U32_KEY(e_min)},
      {{"e_max", "1024", "energy of a seed at or above the reference score"}, U32_KEY(e_max)},
      {{"reference_quantile", "0.95", "quantile of queue scores used as reference score"},
       DOUBLE_KEY(reference_quantile)},
      {{"time_floor_ms", "1", "lower clamp on execution time in the efficiency reward"},
       [](CampaignConfig& c, const std::string& k, const std::string& v, const auto&) {
         c.time_floor_s = ToDouble(k, v) / 1000.0;
       },
       [](const CampaignConfig& c) { return Num(c.time_floor_s * 1000.0); }},
      {{"p_skip", "0.75", "probability of skipping a non-favored seed"}, DOUBLE_KEY(p_skip)},
      {{"max_stack", "4", "maximum stacked mutation operators per mutant"}, U32_KEY(max_stack)},
      {{"splice_probability", "0.2", "probability of splicing with another seed first"},
       DOUBLE_KEY(splice_probability)},
      {{"poll_interval_ms", "50", "component liveness poll interval"}, INT_KEY(poll_interval_ms)},
      {{"restart_timeout_ms", "2000", "time allowed for a restarted component to come up"},
       INT_KEY(restart_timeout_ms)},
      {{"storm_limit", "10", "restarts tolerated within storm_window_s"}, INT_KEY(storm_limit)},
      {{"storm_window_s", "60", "restart storm window"}, DOUBLE_KEY(storm_window_s)},
      {{"corpus_dir", "", "initial corpus of .mcsq files (default: built-in seeds)"},
       PATH_KEY(corpus_dir)},
      {{"output_dir", "mcfuzz-out", "campaign output directory"}, PATH_KEY(output_dir)},
      {{"crash_dir", "", "crash logs and witnesses (default: <output_dir>/crashes)"},
       PATH_KEY(crash_dir)},
      {{"queue_dir", "", "admitted seeds (default: <output_dir>/queue)"}, PATH_KEY(queue_dir)},
      {{"stats_file", "", "statistics CSV (default: <output_dir>/stats.csv)"},
       PATH_KEY(stats_file)},
      {{"stats_interval_s", "5", "seconds between statistics rows"}, DOUBLE_KEY(stats_interval_s)},
  };
  return keys;
}

#undef U64_KEY
#undef U32_KEY
#undef INT_KEY
#undef DOUBLE_KEY
#undef PATH_KEY

}  // namespace

const char* ModeName(CampaignMode m) { return m == CampaignMode::kMulti ? "multi" : "main-only"; }

CampaignMode ParseMode(const std::string& text) {
  if (text == "multi") return CampaignMode::kMulti;
  if (text == "main-only") return CampaignMode::kMainOnly;
  throw ConfigError("unknown mode '" + text + "' (expected multi or main-only)");
}

ScoreWeights CampaignConfig::weights() const {
  ScoreWeights w = ScoreWeights::Defaults(channel_count());
  w.w1 = w1;
  w.w2 = w2;
  w.beta = beta;
  if (!alphas.empty()) w.alphas = alphas;
  if (mode == CampaignMode::kMainOnly)
    for (std::size_t i = 1; i < w.alphas.size(); ++i) w.alphas[i] = 0.0;
  return w;
}

EnergyPolicy CampaignConfig::energy_policy() const {
  EnergyPolicy p;
  p.e_min = e_min;
  p.e_max = e_max;
  return p;
}

void CampaignConfig::ApplyMode(CampaignMode m) {
  mode = m;
  if (mode == CampaignMode::kMainOnly) {
    sweep_interval = 0;
    for (std::size_t i = 1; i < alphas.size(); ++i) alphas[i] = 0.0;
  }
}

void CampaignConfig::Finalize() {
  ApplyMode(mode);
  ValidateMapSize(map_size);
  if (map_size < sutsim::EdgeBudget(sutsim::Role::kEntry))
    throw ConfigError("map_size " + std::to_string(map_size) +
                      " is smaller than the target's edge budget");
  std::set<sutsim::Role> seen;
  for (auto r : downstreams) {
    if (r == sutsim::Role::kEntry) throw ConfigError("downstreams may not include the entry");
    if (!seen.insert(r).second)
      throw ConfigError("downstream " + std::string(sutsim::RoleName(r)) + " listed twice");
  }
  if (!alphas.empty() && alphas.size() != channel_count())
    throw ConfigError("alphas has " + std::to_string(alphas.size()) + " entries for " +
                      std::to_string(channel_count()) + " channels");
  weights().Validate();
  energy_policy().Validate();
  if (budget_s < 0) throw ConfigError("budget_s must be >= 0");
  if (stats_interval_s <= 0) throw ConfigError("stats_interval_s must be > 0");
  if (reference_quantile <= 0 || reference_quantile > 1)
    throw ConfigError("reference_quantile must be in (0, 1]");
  if (time_floor_s <= 0) throw ConfigError("time_floor_ms must be > 0");
  if (p_skip < 0 || p_skip > 1) throw ConfigError("p_skip must be in [0, 1]");
  if (splice_probability < 0 || splice_probability > 1)
    throw ConfigError("splice_probability must be in [0, 1]");
  if (max_stack < 1) throw ConfigError("max_stack must be >= 1");
  if (settle_ms < 0) throw ConfigError("settle_ms must be >= 0");
  if (message_timeout_ms < 1) throw ConfigError("message_timeout_ms must be >= 1");
  if (collector_timeout_ms < 10) throw ConfigError("collector_timeout_ms must be >= 10");
  if (downstream_deadline_ms < 1) throw ConfigError("downstream_deadline_ms must be >= 1");
  if (poll_interval_ms < 1) throw ConfigError("poll_interval_ms must be >= 1");
  if (restart_timeout_ms < 1) throw ConfigError("restart_timeout_ms must be >= 1");
  if (storm_limit < 0 || storm_window_s <= 0) throw ConfigError("bad restart storm limits");
  if (output_dir.empty()) throw ConfigError("output_dir must be set");
  if (crash_dir.empty()) crash_dir = output_dir / "crashes";
  if (queue_dir.empty()) queue_dir = output_dir / "queue";
  if (stats_file.empty()) stats_file = output_dir / "stats.csv";
}

void SetConfigValue(CampaignConfig& config, const std::string& key, const std::string& value,
                    const std::filesystem::path& base) {
  for (const auto& k : Keys()) {
    if (key == k.doc.key) {
      k.set(config, key, value, base);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

CampaignConfig ParseConfigText(const std::string& text, const std::filesystem::path& base) {
  CampaignConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      SetConfigValue(config, key, value, base);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

CampaignConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfigText(buf.str(), std::filesystem::absolute(path).parent_path());
}

std::span<const ConfigKeyDoc> ConfigKeyDocs() {
  static const std::vector<ConfigKeyDoc> docs = [] {
    std::vector<ConfigKeyDoc> out;
    for (const auto& k : Keys()) out.push_back(k.doc);
    return out;
  }();
  return docs;
}

std::string DumpConfig(const CampaignConfig& config) {
  std::string out;
  for (const auto& k : Keys()) out += std::string(k.doc.key) + " = " + k.get(config) + "\n";
  return out;
}

}  // namespace mcfuzz

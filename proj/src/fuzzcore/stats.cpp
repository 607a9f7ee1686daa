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

#include "mcfuzz/fuzzcore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {

std::vector<std::string> StatsColumns(std::size_t channels) {
  std::vector<std::string> cols = {"elapsed_s", "execs", "execs_per_s"};
  for (std::size_t i = 0; i < channels; ++i) cols.push_back("edges_ch" + std::to_string(i));
  for (std::size_t i = 0; i < channels; ++i) cols.push_back("rate_ch" + std::to_string(i));
  cols.insert(cols.end(), {"corpus", "unique_crashes", "total_crashes"});
  return cols;
}

StatsWriter::StatsWriter(const std::filesystem::path& path, std::size_t channels)
    : path_(path), channels_(channels) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::trunc);
  const auto cols = StatsColumns(channels);
  for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
  out_ << '\n' << std::flush;
  if (!out_) throw ConfigError("cannot write stats file " + path.string());
}

void StatsWriter::Append(const StatsRow& row) {
  if (row.edges.size() != channels_ || row.rates.size() != channels_)
    throw ConfigError("stats row has the wrong number of channels");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f,%llu,%.2f", row.elapsed_s,
                static_cast<unsigned long long>(row.execs), row.execs_per_s);
  out_ << buf;
  for (uint64_t e : row.edges) out_ << ',' << e;
  for (double r : row.rates) {
    std::snprintf(buf, sizeof(buf), ",%.4f", r);
    out_ << buf;
  }
  out_ << ',' << row.corpus << ',' << row.unique_crashes << ',' << row.total_crashes << '\n'
       << std::flush;
  if (!out_) throw ConfigError("write to stats file " + path_.string() + " failed");
  ++rows_;
}

int StatsTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

StatsTable ReadStatsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  StatsTable t;
  t.source = path;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw ConfigError(path.string() + ": missing header");
  {
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) t.columns.push_back(col);
  }
  if (t.columns.empty() || t.columns[0] != "elapsed_s")
    throw ConfigError(path.string() + ": first column must be elapsed_s");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0')
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad value '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(t.columns.size()) + " columns");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> CheckStatsInvariants(const StatsTable& table) {
  std::vector<std::string> out;
  auto complain = [&](std::size_t row, const std::string& what) {
    out.push_back(table.source.string() + " row " + std::to_string(row + 1) + ": " + what);
  };
  std::vector<std::pair<int, bool>> checks;  // column, strictly increasing
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const std::string& name = table.columns[c];
    if (name == "elapsed_s" || name == "execs") checks.emplace_back(c, true);
    else if (name.rfind("edges_ch", 0) == 0 || name == "corpus" || name == "unique_crashes" ||
             name == "total_crashes")
      checks.emplace_back(c, false);
  }
  const int unique = table.column("unique_crashes");
  const int total = table.column("total_crashes");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (unique >= 0 && total >= 0 && row[unique] > row[total])
      complain(r, "unique_crashes exceeds total_crashes");
    if (r == 0) continue;
    const auto& prev = table.rows[r - 1];
    for (const auto& [c, strict] : checks) {
      if (strict ? !(row[c] > prev[c]) : row[c] < prev[c])
        complain(r, table.columns[c] + (strict ? " not strictly increasing" : " decreased"));
    }
  }
  return out;
}

StatsSummary Summarize(const std::vector<StatsTable>& runs, double bucket_s) {
  if (runs.empty()) throw ConfigError("nothing to summarize");
  if (bucket_s <= 0) throw ConfigError("bucket width must be positive");
  StatsSummary s;
  for (const StatsTable& t : runs)
    if (t.columns != runs[0].columns)
      throw ConfigError(t.source.string() + " has different columns from " +
                        runs[0].source.string());
  s.columns.assign(runs[0].columns.begin() + 1, runs[0].columns.end());
  const std::size_t k = s.columns.size();

  // bucket index -> one row per run that reached it
  std::map<long long, std::vector<const std::vector<double>*>> grid;
  for (const StatsTable& t : runs) {
    std::map<long long, const std::vector<double>*> last;
    for (const auto& row : t.rows) last[std::llround(row[0] / bucket_s)] = &row;
    for (const auto& [b, row] : last) grid[b].push_back(row);
  }
  for (const auto& [b, rows] : grid) {
    SummaryBucket bucket;
    bucket.t = static_cast<double>(b) * bucket_s;
    bucket.runs = rows.size();
    bucket.mean.assign(k, 0.0);
    bucket.min.assign(k, 0.0);
    bucket.max.assign(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      double sum = 0.0, lo = (*rows[0])[c + 1], hi = lo;
      for (const auto* row : rows) {
        const double v = (*row)[c + 1];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      // Rounding in the sum can push the mean a hair outside [min, max].
      bucket.mean[c] = std::clamp(sum / static_cast<double>(rows.size()), lo, hi);
      bucket.min[c] = lo;
      bucket.max[c] = hi;
    }
    s.buckets.push_back(std::move(bucket));
  }
  return s;
}

void WriteSummaryCsv(const StatsSummary& summary, std::ostream& out) {
  out << "t_s,runs";
  for (const auto& c : summary.columns) out << ',' << c << "_mean," << c << "_min," << c << "_max";
  out << '\n';
  char buf[64];
  for (const SummaryBucket& b : summary.buckets) {
    std::snprintf(buf, sizeof(buf), "%g,%zu", b.t, b.runs);
    out << buf;
    for (std::size_t c = 0; c < summary.columns.size(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,%.10g", b.mean[c], b.min[c], b.max[c]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace mcfuzz

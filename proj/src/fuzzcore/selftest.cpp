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

#include "mcfuzz/fuzzcore/selftest.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "mcfuzz/common/rng.hpp"
#include "mcfuzz/coverage/coverage.hpp"
#include "mcfuzz/mccm/frame.hpp"
#include "mcfuzz/scoring/scoring.hpp"

namespace mcfuzz {
namespace {

int ReferenceBucket(int hits) {
  if (hits <= 2) return hits;
  if (hits <= 4) return 3;
  if (hits <= 8) return 4;
  if (hits <= 16) return 5;
  if (hits <= 32) return 6;
  return 7;
}

std::string BucketSuite() {
  for (int h = 0; h < 256; ++h)
    if (BucketOf(static_cast<uint8_t>(h)) != ReferenceBucket(h))
      return "hit count " + std::to_string(h);
  return "";
}

std::string NewBitsSuite() {
  constexpr std::size_t kSize = 1024;
  Rng rng(0x5e1f7e57);
  for (int trial = 0; trial < 300; ++trial) {
    VirginState virgin(0, kSize);
    std::set<std::pair<std::size_t, int>> seen;
    const int rounds = 1 + static_cast<int>(rng.Below(4));
    for (int round = 0; round < rounds; ++round) {
      CoverageMap map(0, kSize);
      const int hits = static_cast<int>(rng.Below(64));
      for (int i = 0; i < hits; ++i) {
        const std::size_t e = rng.Below(kSize);
        map.cells()[e] = static_cast<uint8_t>(rng.Below(256));
      }
      std::size_t expected = 0;
      for (std::size_t e = 0; e < kSize; ++e) {
        const int b = ReferenceBucket(map.cells()[e]);
        if (b > 0 && seen.insert({e, b}).second) ++expected;
      }
      ClassifyCounts(map);
      const NewBitsResult r = HasNewBits(map, virgin);
      if (r.gain.new_edges != expected || r.novel != (expected > 0))
        return "trial " + std::to_string(trial);
    }
  }
  return "";
}

std::string ScoringSuite() {
  ScoreWeights w;
  w.alphas = {0.4, 0.2, 0.2, 0.2};
  ExecutionRecord rec;
  const double c[] = {0.01, 0.0, 0.005, 0.0};
  for (ChannelId ch = 0; ch < 4; ++ch) rec.gains.push_back({ch, 0, c[ch]});
  rec.exec_time_s = 0.05;
  const ScoreBreakdown s = Score(rec, w);
  auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-12 * std::fabs(b); };
  if (!close(s.rc, 0.005) || !close(s.re, 0.03) || !close(s.s, 0.0125))
    return "hand example (rc, re, s) = (" + std::to_string(s.rc) + ", " + std::to_string(s.re) +
           ", " + std::to_string(s.s) + ")";
  return "";
}

std::string FrameSuite() {
  Rng rng(0xf4a3e);
  const uint8_t types[] = {0x01, 0x81, 0x02, 0x82, 0x03, 0x83, 0x04, 0x84, 0x7f};
  for (int i = 0; i < 500; ++i) {
    mccm::Frame f;
    f.type = types[rng.Below(std::size(types))];
    f.payload.resize(rng.Below(2048));
    for (auto& b : f.payload) b = static_cast<uint8_t>(rng.Next());
    const Bytes wire = mccm::EncodeFrame(f);
    std::size_t used = 0;
    const auto back = mccm::DecodeFrame(wire, &used);
    if (!back || used != wire.size() || back->type != f.type || back->payload != f.payload)
      return "frame " + std::to_string(i);
  }
  return "";
}

}  // namespace

bool RunSelfTest(std::ostream& out) {
  const std::pair<const char*, std::string (*)()> suites[] = {
      {"bucket classification", BucketSuite},
      {"new-bit detection", NewBitsSuite},
      {"scoring arithmetic", ScoringSuite},
      {"mccm frame round trip", FrameSuite},
  };
  bool ok = true;
  for (const auto& [name, fn] : suites) {
    const std::string failure = fn();
    out << (failure.empty() ? "PASS " : "FAIL ") << name;
    if (!failure.empty()) out << ": " << failure;
    out << '\n';
    ok &= failure.empty();
  }
  return ok;
}

}  // namespace mcfuzz

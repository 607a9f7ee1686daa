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

#include "mcfuzz/scoring/scheduler.hpp"

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {

SeedScheduler::SeedScheduler(double p_skip) : p_skip_(p_skip) {
  if (p_skip < 0.0 || p_skip > 1.0) throw ConfigError("p_skip must be in [0, 1]");
}

SeedScheduler::Pick SeedScheduler::Next(std::size_t queue_size,
                                        const std::function<bool(std::size_t)>& is_favored,
                                        Rng& rng) {
  if (queue_size == 0) throw ConfigError("seed queue is empty");
  Pick pick;
  if (!started_) {
    started_ = true;
    pick.new_cycle = true;
    cycles_ = 1;
  }
  for (std::size_t skipped = 0;; ++skipped) {
    if (cursor_ >= queue_size) {
      cursor_ = 0;
      pick.new_cycle = true;
      ++cycles_;
    }
    const std::size_t i = cursor_++;
    if (skipped >= queue_size || is_favored(i) || p_skip_ == 0.0 || !rng.Chance(p_skip_)) {
      pick.index = i;
      return pick;
    }
  }
}

}  // namespace mcfuzz

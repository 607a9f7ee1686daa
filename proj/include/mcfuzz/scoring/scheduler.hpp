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

#ifndef MCFUZZ_SCORING_SCHEDULER_HPP_
#define MCFUZZ_SCORING_SCHEDULER_HPP_

#include <cstddef>
#include <functional>

#include "mcfuzz/common/rng.hpp"

namespace mcfuzz {

// Round-robin seed selection. Seeds that are not favored are skipped with
// probability p_skip each time the cursor reaches them.
class SeedScheduler {
 public:
  explicit SeedScheduler(double p_skip = 0.75);

  struct Pick {
    std::size_t index = 0;
    bool new_cycle = false;  // cursor wrapped (or first pick)
  };

  // `is_favored(i)` reports the favored flag of queue entry i. Throws
  // ConfigError on an empty queue. When every entry in a full pass is
  // skipped the entry under the cursor is returned anyway, so p_skip = 1
  // cannot stall the campaign.
  Pick Next(std::size_t queue_size, const std::function<bool(std::size_t)>& is_favored,
            Rng& rng);

  std::size_t cycles() const { return cycles_; }
  double p_skip() const { return p_skip_; }

 private:
  double p_skip_;
  std::size_t cursor_ = 0;
  std::size_t cycles_ = 0;
  bool started_ = false;
};

}  // namespace mcfuzz

#endif  // MCFUZZ_SCORING_SCHEDULER_HPP_

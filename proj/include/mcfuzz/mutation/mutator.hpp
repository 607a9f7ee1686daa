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

// Havoc-style mutation of message sequences.

#ifndef MCFUZZ_MUTATION_MUTATOR_HPP_
#define MCFUZZ_MUTATION_MUTATOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcfuzz/common/rng.hpp"
#include "mcfuzz/mutation/message_sequence.hpp"

namespace mcfuzz {

enum class MutationOp : uint8_t {
  kBitFlip,
  kByteSet,
  kByteAdd,
  kByteSub,
  kInteresting8,
  kInteresting16,
  kRangeDuplicate,
  kRangeDelete,
  kMessageDuplicate,
  kMessageDrop,
  kMessageSwap,
};

inline constexpr std::size_t kNumStackOps = 11;
std::string_view MutationOpName(MutationOp op);

inline constexpr std::array<uint8_t, 5> kInteresting8Values = {0x00, 0x01, 0x7f, 0x80, 0xff};
inline constexpr std::array<uint16_t, 7> kInteresting16Values = {0x0000, 0x0001, 0x007f, 0x0080,
                                                                 0x00ff, 0x7fff, 0xffff};
inline constexpr uint8_t kMaxArith = 35;

struct MutationBudget {
  uint32_t energy = 0;
  uint64_t rng_seed = 0;
};

struct MutatorOptions {
  std::size_t max_messages = kMaxMessages;
  std::size_t max_message_len = kMaxMessageLen;
  uint32_t max_stack = 4;
  double splice_probability = 0.2;
};

class Mutator {
 public:
  explicit Mutator(MutatorOptions options = {});

  // Applies one operator in place. Returns false (leaving seq untouched)
  // when the operator cannot apply, e.g. dropping the only message.
  bool Apply(MutationOp op, MessageSequence& seq, Rng& rng) const;

  // Replaces a suffix of seq's messages with a suffix of donor's.
  bool Splice(MessageSequence& seq, const MessageSequence& donor, Rng& rng) const;

  // One havoc mutant: optional splice, then a stack of 1..max_stack
  // operators. If `first` is given it is tried first; an inapplicable
  // operator is replaced by a fresh uniform draw.
  MessageSequence MutateOnce(const MessageSequence& seq, std::span<const MessageSequence> donors,
                             Rng& rng, std::optional<MutationOp> first = std::nullopt) const;

  const MutatorOptions& options() const { return options_; }

 private:
  MutationOp DrawApplied(MessageSequence& seq, Rng& rng) const;
  void Clamp(MessageSequence& seq) const;

  MutatorOptions options_;
};

// Lazily produces exactly budget.energy mutants of `seed`. The stream is a
// pure function of (seed, budget, donors, options).
class MutantStream {
 public:
  MutantStream(const Mutator& mutator, MessageSequence seed, MutationBudget budget,
               std::span<const MessageSequence> donors);

  bool Next(MessageSequence& out);
  uint32_t emitted() const { return emitted_; }
  uint32_t remaining() const { return budget_.energy - emitted_; }

 private:
  const Mutator& mutator_;
  MessageSequence seed_;
  MutationBudget budget_;
  std::span<const MessageSequence> donors_;
  Rng rng_;
  uint32_t emitted_ = 0;
};

std::vector<MessageSequence> Mutate(const Mutator& mutator, const MessageSequence& seq,
                                    MutationBudget budget,
                                    std::span<const MessageSequence> donors);

}  // namespace mcfuzz

#endif  // MCFUZZ_MUTATION_MUTATOR_HPP_

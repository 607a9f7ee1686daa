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

#include "mcfuzz/mutation/mutator.hpp"

#include <algorithm>
#include <utility>

namespace mcfuzz {
namespace {

constexpr std::size_t kMaxRange = 32;
constexpr int kMaxDrawAttempts = 64;

// Picks a message with at least `min_len` bytes, uniformly among those that
// qualify. Returns nullptr if none does.
Bytes* PickMessage(MessageSequence& seq, std::size_t min_len, Rng& rng) {
  std::size_t eligible = 0;
  for (const auto& m : seq.messages) eligible += m.size() >= min_len;
  if (eligible == 0) return nullptr;
  std::size_t target = rng.Below(eligible);
  for (auto& m : seq.messages) {
    if (m.size() < min_len) continue;
    if (target-- == 0) return &m;
  }
  return nullptr;
}

}  // namespace

std::string_view MutationOpName(MutationOp op) {
  switch (op) {
    case MutationOp::kBitFlip: return "bit-flip";
    case MutationOp::kByteSet: return "byte-set";
    case MutationOp::kByteAdd: return "byte-add";
    case MutationOp::kByteSub: return "byte-sub";
    case MutationOp::kInteresting8: return "interesting-8";
    case MutationOp::kInteresting16: return "interesting-16";
    case MutationOp::kRangeDuplicate: return "range-duplicate";
    case MutationOp::kRangeDelete: return "range-delete";
    case MutationOp::kMessageDuplicate: return "message-duplicate";
    case MutationOp::kMessageDrop: return "message-drop";
    case MutationOp::kMessageSwap: return "message-swap";
  }
  return "?";
}

Mutator::Mutator(MutatorOptions options) : options_(options) {}

bool Mutator::Apply(MutationOp op, MessageSequence& seq, Rng& rng) const {
  switch (op) {
    case MutationOp::kBitFlip: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m) return false;
      const std::size_t bit = rng.Below(m->size() * 8);
      (*m)[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
      return true;
    }
    case MutationOp::kByteSet: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m) return false;
      // XOR with a nonzero value so the byte always changes.
      (*m)[rng.Below(m->size())] ^= static_cast<uint8_t>(rng.Between(1, 255));
      return true;
    }
    case MutationOp::kByteAdd:
    case MutationOp::kByteSub: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m) return false;
      uint8_t& b = (*m)[rng.Below(m->size())];
      const auto delta = static_cast<uint8_t>(rng.Between(1, kMaxArith));
      b = op == MutationOp::kByteAdd ? static_cast<uint8_t>(b + delta)
                                     : static_cast<uint8_t>(b - delta);
      return true;
    }
    case MutationOp::kInteresting8: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m) return false;
      (*m)[rng.Below(m->size())] = kInteresting8Values[rng.Below(kInteresting8Values.size())];
      return true;
    }
    case MutationOp::kInteresting16: {
      Bytes* m = PickMessage(seq, 2, rng);
      if (!m) return false;
      const std::size_t pos = rng.Below(m->size() - 1);
      uint16_t v = kInteresting16Values[rng.Below(kInteresting16Values.size())];
      if (rng.Below(2)) v = static_cast<uint16_t>((v >> 8) | (v << 8));
      (*m)[pos] = static_cast<uint8_t>(v);
      (*m)[pos + 1] = static_cast<uint8_t>(v >> 8);
      return true;
    }
    case MutationOp::kRangeDuplicate: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m || m->size() >= options_.max_message_len) return false;
      const std::size_t len = rng.Between(1, std::min(m->size(), kMaxRange));
      const std::size_t from = rng.Below(m->size() - len + 1);
      const std::size_t to = rng.Below(m->size() + 1);
      Bytes chunk(m->begin() + from, m->begin() + from + len);
      m->insert(m->begin() + to, chunk.begin(), chunk.end());
      if (m->size() > options_.max_message_len) m->resize(options_.max_message_len);
      return true;
    }
    case MutationOp::kRangeDelete: {
      Bytes* m = PickMessage(seq, 1, rng);
      if (!m) return false;
      const std::size_t len = rng.Between(1, std::min(m->size(), kMaxRange));
      const std::size_t from = rng.Below(m->size() - len + 1);
      m->erase(m->begin() + from, m->begin() + from + len);
      return true;
    }
    case MutationOp::kMessageDuplicate: {
      if (seq.messages.empty() || seq.messages.size() >= options_.max_messages) return false;
      const std::size_t i = rng.Below(seq.messages.size());
      const std::size_t to = rng.Below(seq.messages.size() + 1);
      Bytes copy = seq.messages[i];
      seq.messages.insert(seq.messages.begin() + to, std::move(copy));
      return true;
    }
    case MutationOp::kMessageDrop: {
      if (seq.messages.size() < 2) return false;
      seq.messages.erase(seq.messages.begin() + rng.Below(seq.messages.size()));
      return true;
    }
    case MutationOp::kMessageSwap: {
      if (seq.messages.size() < 2) return false;
      const std::size_t a = rng.Below(seq.messages.size());
      std::size_t b = rng.Below(seq.messages.size() - 1);
      if (b >= a) ++b;
      std::swap(seq.messages[a], seq.messages[b]);
      return true;
    }
  }
  return false;
}

bool Mutator::Splice(MessageSequence& seq, const MessageSequence& donor, Rng& rng) const {
  if (seq.messages.empty() || donor.messages.empty()) return false;
  const std::size_t keep = rng.Between(1, seq.messages.size());
  const std::size_t from = rng.Below(donor.messages.size());
  seq.messages.resize(keep);
  seq.messages.insert(seq.messages.end(), donor.messages.begin() + from, donor.messages.end());
  Clamp(seq);
  return true;
}

MutationOp Mutator::DrawApplied(MessageSequence& seq, Rng& rng) const {
  for (int attempt = 0; attempt < kMaxDrawAttempts; ++attempt) {
    const auto op = static_cast<MutationOp>(rng.Below(kNumStackOps));
    if (Apply(op, seq, rng)) return op;
  }
  return MutationOp::kBitFlip;
}

void Mutator::Clamp(MessageSequence& seq) const {
  if (seq.messages.size() > options_.max_messages) seq.messages.resize(options_.max_messages);
  for (auto& m : seq.messages)
    if (m.size() > options_.max_message_len) m.resize(options_.max_message_len);
}

MessageSequence Mutator::MutateOnce(const MessageSequence& seq,
                                    std::span<const MessageSequence> donors, Rng& rng,
                                    std::optional<MutationOp> first) const {
  MessageSequence out = seq;
  if (!donors.empty() && rng.Chance(options_.splice_probability))
    Splice(out, donors[rng.Below(donors.size())], rng);
  const auto depth = static_cast<uint32_t>(rng.Between(1, std::max<uint32_t>(options_.max_stack, 1)));
  for (uint32_t k = 0; k < depth; ++k) {
    if (k == 0 && first && Apply(*first, out, rng)) continue;
    DrawApplied(out, rng);
  }
  Clamp(out);
  return out;
}

MutantStream::MutantStream(const Mutator& mutator, MessageSequence seed, MutationBudget budget,
                           std::span<const MessageSequence> donors)
    : mutator_(mutator),
      seed_(std::move(seed)),
      budget_(budget),
      donors_(donors),
      rng_(budget.rng_seed) {}

bool MutantStream::Next(MessageSequence& out) {
  if (emitted_ >= budget_.energy) return false;
  out = mutator_.MutateOnce(seed_, donors_, rng_);
  ++emitted_;
  return true;
}

std::vector<MessageSequence> Mutate(const Mutator& mutator, const MessageSequence& seq,
                                    MutationBudget budget,
                                    std::span<const MessageSequence> donors) {
  std::vector<MessageSequence> out;
  out.reserve(budget.energy);
  MutantStream stream(mutator, seq, budget, donors);
  MessageSequence m;
  while (stream.Next(m)) out.push_back(std::move(m));
  return out;
}

}  // namespace mcfuzz

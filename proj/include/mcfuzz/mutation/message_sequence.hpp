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

#ifndef MCFUZZ_MUTATION_MESSAGE_SEQUENCE_HPP_
#define MCFUZZ_MUTATION_MESSAGE_SEQUENCE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mcfuzz/common/bytes.hpp"

namespace mcfuzz {

inline constexpr std::size_t kMaxMessages = 64;
inline constexpr std::size_t kMaxMessageLen = 4096;

// An ordered list of framed protocol messages sent within one session.
struct MessageSequence {
  std::vector<Bytes> messages;
  std::string origin = "initial-corpus";

  // Equality ignores origin.
  bool operator==(const MessageSequence& other) const { return messages == other.messages; }

  bool Valid() const;
  std::size_t TotalBytes() const;
};

}  // namespace mcfuzz

#endif  // MCFUZZ_MUTATION_MESSAGE_SEQUENCE_HPP_

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

// Corpus file format (little-endian):
//   "MCSQ" | u8 version (0x01) | u32 count | count x (u32 len | len bytes)

#ifndef MCFUZZ_MUTATION_CORPUS_IO_HPP_
#define MCFUZZ_MUTATION_CORPUS_IO_HPP_

#include <filesystem>

#include "mcfuzz/common/bytes.hpp"
#include "mcfuzz/mutation/message_sequence.hpp"

namespace mcfuzz {

inline constexpr char kCorpusMagic[4] = {'M', 'C', 'S', 'Q'};
inline constexpr uint8_t kCorpusVersion = 0x01;

Bytes SerializeCorpus(const MessageSequence& seq);

// Throws ParseError (with the failing byte offset) on bad magic, bad
// version, truncation, trailing bytes or an invariant violation.
MessageSequence DeserializeCorpus(ByteView data);

void WriteSequenceFile(const std::filesystem::path& path, const MessageSequence& seq);
MessageSequence ReadSequenceFile(const std::filesystem::path& path);

}  // namespace mcfuzz

#endif  // MCFUZZ_MUTATION_CORPUS_IO_HPP_

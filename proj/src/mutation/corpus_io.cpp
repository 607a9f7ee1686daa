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

#include "mcfuzz/mutation/corpus_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "mcfuzz/common/error.hpp"

namespace mcfuzz {

bool MessageSequence::Valid() const {
  if (messages.empty() || messages.size() > kMaxMessages) return false;
  for (const auto& m : messages)
    if (m.size() > kMaxMessageLen) return false;
  return true;
}

std::size_t MessageSequence::TotalBytes() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.size();
  return n;
}

Bytes SerializeCorpus(const MessageSequence& seq) {
  Bytes out;
  out.reserve(9 + seq.TotalBytes() + 4 * seq.messages.size());
  out.insert(out.end(), std::begin(kCorpusMagic), std::end(kCorpusMagic));
  out.push_back(kCorpusVersion);
  PutU32(out, static_cast<uint32_t>(seq.messages.size()));
  for (const auto& m : seq.messages) {
    PutU32(out, static_cast<uint32_t>(m.size()));
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

MessageSequence DeserializeCorpus(ByteView data) {
  std::size_t off = 0;
  auto need = [&](std::size_t n, const char* what) {
    if (data.size() - off < n)
      throw ParseError(off, std::string("truncated ") + what + ": need " + std::to_string(n) +
                                " bytes, have " + std::to_string(data.size() - off));
  };
  need(4, "magic");
  if (std::memcmp(data.data(), kCorpusMagic, 4) != 0) throw ParseError(0, "bad magic");
  off = 4;
  need(1, "version");
  if (data[off] != kCorpusVersion)
    throw ParseError(off, "unsupported version " + std::to_string(data[off]));
  off += 1;
  need(4, "message count");
  const uint32_t count = GetU32(data.data() + off);
  if (count == 0 || count > kMaxMessages)
    throw ParseError(off, "message count " + std::to_string(count) + " outside [1, " +
                              std::to_string(kMaxMessages) + "]");
  off += 4;
  MessageSequence seq;
  seq.messages.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    need(4, "message length");
    const uint32_t len = GetU32(data.data() + off);
    if (len > kMaxMessageLen)
      throw ParseError(off, "message length " + std::to_string(len) + " exceeds " +
                                std::to_string(kMaxMessageLen));
    off += 4;
    need(len, "message payload");
    seq.messages.emplace_back(data.begin() + off, data.begin() + off + len);
    off += len;
  }
  if (off != data.size()) throw ParseError(off, "trailing bytes after last message");
  return seq;
}

void WriteSequenceFile(const std::filesystem::path& path, const MessageSequence& seq) {
  const Bytes bytes = SerializeCorpus(seq);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ConfigError("short write to " + path.string());
}

MessageSequence ReadSequenceFile(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  MessageSequence seq = DeserializeCorpus(bytes);
  seq.origin = path.filename().string();
  return seq;
}

}  // namespace mcfuzz

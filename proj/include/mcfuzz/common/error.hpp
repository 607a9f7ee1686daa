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

#ifndef MCFUZZ_COMMON_ERROR_HPP_
#define MCFUZZ_COMMON_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcfuzz {

// Invalid configuration or violated API precondition (size mismatch, bad
// weights, malformed config file). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed wire frame or unexpected reply from a peer.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus / file parse failure at a known byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// The target could not be started or kept alive. Exit code 3.
class TargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many unexpected component restarts in the storm window. Exit code 4.
class RestartStormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcfuzz

#endif  // MCFUZZ_COMMON_ERROR_HPP_

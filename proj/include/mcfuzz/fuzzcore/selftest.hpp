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

// Built-in oracle checks run by `mcfuzz selftest`: bucket table, new-bit
// detection against an (edge, bucket) set oracle, scoring arithmetic and
// MCCM frame round trips.

#ifndef MCFUZZ_FUZZCORE_SELFTEST_HPP_
#define MCFUZZ_FUZZCORE_SELFTEST_HPP_

#include <ostream>

namespace mcfuzz {

// Prints one PASS/FAIL line per suite; returns true when all pass.
bool RunSelfTest(std::ostream& out);

}  // namespace mcfuzz

#endif  // MCFUZZ_FUZZCORE_SELFTEST_HPP_

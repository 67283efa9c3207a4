// Copyright 2025 The leb128-bulk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "leb128/varint.hpp"

namespace leb128::testing {

// Values with uniformly random bit widths, so every encoded length shows up
// instead of the 9-10 byte lengths a plain uniform u64 draw produces.
template <UnsignedWord T>
std::vector<T> random_mixed_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<T> values(n);
  for (auto& v : values) {
    const unsigned keep = eng() % (sizeof(T) * 8 + 1);
    v = keep == 0 ? 0 : static_cast<T>(eng()) >> (sizeof(T) * 8 - keep);
  }
  return values;
}

// Independent sizing oracle: count 7-bit groups directly.
template <UnsignedWord T>
std::size_t size_oracle(T v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

}  // namespace leb128::testing

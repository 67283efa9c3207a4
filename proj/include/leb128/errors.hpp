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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leb128 {

// Base class for decode errors. `offset` is the byte position in the input
// buffer where the problem was detected.
class CodecError : public std::runtime_error {
 public:
  CodecError(const std::string& kind, std::size_t offset)
      : std::runtime_error(kind + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A continuation run longer than any legal varint of the requested width.
class MalformedVarint : public CodecError {
 public:
  explicit MalformedVarint(std::size_t offset)
      : CodecError("malformed varint", offset) {}
};

// The input ended before the final byte of a varint.
class Truncated : public CodecError {
 public:
  explicit Truncated(std::size_t offset)
      : CodecError("truncated varint", offset) {}
};

}  // namespace leb128

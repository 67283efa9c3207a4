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

// Scalar LEB128 codec: encoder, decoder, skipper and size estimator.
// Each byte carries 7 payload bits, least-significant group first; the MSB is
// the continuation flag and the terminator byte has it clear. This is the
// reference path that the bulk decoder is checked against.

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "leb128/errors.hpp"

namespace leb128 {

// Decoded element type: 32- or 64-bit unsigned integers.
template <typename T>
concept UnsignedWord =
    std::same_as<T, std::uint32_t> || std::same_as<T, std::uint64_t>;

// Runtime tag for the element width of a stream.
enum class Width : std::uint8_t { u32 = 32, u64 = 64 };

template <UnsignedWord T>
inline constexpr Width kWidthOf = sizeof(T) == 4 ? Width::u32 : Width::u64;

// 7 payload bits per byte: 32-bit values need up to 5 bytes, 64-bit up to 10.
template <UnsignedWord T>
inline constexpr std::size_t kMaxEncodedLen = (sizeof(T) * 8 + 6) / 7;

// Shift of the last payload group: 28 for 32-bit values, 63 for 64-bit.
template <UnsignedWord T>
inline constexpr unsigned kMaxDecodeShift = 7 * (kMaxEncodedLen<T> - 1);

inline constexpr std::size_t max_encoded_len(Width w) {
  return w == Width::u32 ? kMaxEncodedLen<std::uint32_t>
                         : kMaxEncodedLen<std::uint64_t>;
}

// A LEB128-encoded sequence of `count` values of element width `width`.
// Well-formed streams contain exactly `count` terminator bytes and no
// continuation run longer than max_encoded_len(width) - 1.
struct EncodedStream {
  std::vector<std::uint8_t> bytes;
  std::uint64_t count = 0;
  Width width = Width::u64;
};

// Outcome of a whole-stream decode or skip.
struct DecodeResult {
  std::uint64_t values = 0;   // values produced
  std::size_t consumed = 0;   // bytes consumed from the input
};

namespace detail {

inline std::uint64_t load_le64(const std::uint8_t* p) noexcept {
  std::uint64_t w;
  std::memcpy(&w, p, sizeof w);
  if constexpr (std::endian::native == std::endian::big) {
    w = __builtin_bswap64(w);
  }
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sizing
// ---------------------------------------------------------------------------

// Encoded byte count, indexed by countl_zero(value | 1).
inline constexpr std::uint8_t kSizeLut32[32] = {
    5, 5, 5, 5,
    4, 4, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3,
    2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1};

inline constexpr std::uint8_t kSizeLut64[64] = {
    10,
    9, 9, 9, 9, 9, 9, 9, 8, 8, 8, 8, 8, 8, 8,
    7, 7, 7, 7, 7, 7, 7, 6, 6, 6, 6, 6, 6, 6,
    5, 5, 5, 5, 5, 5, 5, 4, 4, 4, 4, 4, 4, 4,
    3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2,
    1, 1, 1, 1, 1, 1, 1};

// Byte count of the minimal encoding of `value`. The `| 1` keeps the
// leading-zero count in range for zero without a separate branch.
template <UnsignedWord T>
constexpr std::size_t encoded_size(T value) noexcept {
  if constexpr (sizeof(T) == 4) {
    return kSizeLut32[std::countl_zero(static_cast<std::uint32_t>(value | 1u))];
  } else {
    return kSizeLut64[std::countl_zero(value | std::uint64_t{1})];
  }
}

template <UnsignedWord T>
constexpr std::uint64_t encoded_size_batch(std::span<const T> values) noexcept {
  std::uint64_t total = 0;
  for (T v : values) total += encoded_size(v);
  return total;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

// Appends the encoding of `value` to `out`; returns the number of bytes
// written (1..kMaxEncodedLen<T>).
template <UnsignedWord T>
std::size_t encode_one(T value, std::vector<std::uint8_t>& out) {
  std::size_t n = 1;
  while (value >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(value) | 0x80u);
    value >>= 7;
    ++n;
  }
  out.push_back(static_cast<std::uint8_t>(value));
  return n;
}

template <UnsignedWord T>
EncodedStream encode_stream(std::span<const T> values) {
  EncodedStream stream;
  stream.width = kWidthOf<T>;
  stream.count = values.size();
  stream.bytes.reserve(encoded_size_batch(values));
  for (T v : values) encode_one(v, stream.bytes);
  return stream;
}

// ---------------------------------------------------------------------------
// Scalar decoding
// ---------------------------------------------------------------------------

template <UnsignedWord T>
struct DecodedValue {
  T value;
  std::size_t length;  // bytes consumed
};

// Decodes one varint starting at `pos`. Arithmetic runs in 64 bits and the
// result is truncated to T on return, so payload bits above the width wrap
// away rather than fault. Error offsets are absolute within `buf`.
//
// Throws Truncated if the buffer ends before a terminator byte, and
// MalformedVarint if the continuation run exceeds kMaxEncodedLen<T> bytes.
template <UnsignedWord T>
DecodedValue<T> decode_one_at(std::span<const std::uint8_t> buf,
                              std::size_t pos) {
  std::uint64_t acc = 0;
  std::size_t i = pos;
  for (unsigned shift = 0; shift <= kMaxDecodeShift<T>; shift += 7) {
    if (i >= buf.size()) throw Truncated(i);
    const std::uint8_t byte = buf[i++];
    acc |= static_cast<std::uint64_t>(byte & 0x7fu) << shift;
    if (!(byte & 0x80u)) {
      return {static_cast<T>(acc), i - pos};
    }
  }
  throw MalformedVarint(pos);
}

template <UnsignedWord T>
DecodedValue<T> decode_one_scalar(std::span<const std::uint8_t> buf) {
  return decode_one_at<T>(buf, 0);
}

// Decodes exactly `count` values into `out` (out.size() >= count).
// Returns bytes consumed.
template <UnsignedWord T>
std::size_t decode_all_scalar(std::span<const std::uint8_t> bytes,
                              std::uint64_t count, std::span<T> out) {
  if (out.size() < count) {
    throw std::invalid_argument("output capacity smaller than value count");
  }
  std::size_t pos = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto [value, length] = decode_one_at<T>(bytes, pos);
    out[i] = value;
    pos += length;
  }
  return pos;
}

template <UnsignedWord T>
std::vector<T> decode_all_scalar(const EncodedStream& stream) {
  if (stream.width != kWidthOf<T>) {
    throw std::invalid_argument("stream width does not match element type");
  }
  std::vector<T> out(stream.count);
  decode_all_scalar<T>(stream.bytes, stream.count, std::span<T>(out));
  return out;
}

// ---------------------------------------------------------------------------
// Skipping
// ---------------------------------------------------------------------------

// Returns the byte offset just past the n-th terminator byte. While at least
// 8 varints remain and 8 bytes are readable, counts terminators a word at a
// time via popcount on the inverted continuation bits; the per-byte fallback
// then finishes, its first pass completing any varint the word loop cut.
inline std::size_t skip_varints(std::uint64_t n,
                                std::span<const std::uint8_t> buf) {
  std::size_t pos = 0;
  while (n >= 8 && buf.size() - pos >= 8) {
    const std::uint64_t word = detail::load_le64(buf.data() + pos);
    n -= static_cast<unsigned>(
        std::popcount(~word & 0x8080808080808080ULL));
    pos += 8;
  }
  while (n > 0) {
    while (true) {
      if (pos >= buf.size()) throw Truncated(pos);
      if (!(buf[pos++] & 0x80u)) break;
    }
    --n;
  }
  return pos;
}

}  // namespace leb128

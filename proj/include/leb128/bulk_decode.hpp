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

// Block-wise bulk LEB128 decoding.
//
// The main loop consumes 6 bytes per step (loaded as an 8-byte word, bytes
// 6-7 never interpreted). One PEXT over the byte MSBs yields the block's
// continuation pattern; a jump table dispatches to a handler specialized at
// compile time from that pattern's CasePlan, so every handler is
// straight-line PEXT extractions with constant masks. Values straddling
// block boundaries travel through a (shift_bits, partial_value) carry; a
// scalar tail finishes whatever the block loop leaves over.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

#include "leb128/case_table.hpp"
#include "leb128/pext.hpp"
#include "leb128/varint.hpp"

#define LEB128_ALWAYS_INLINE inline __attribute__((always_inline))

namespace leb128 {

// A value crossing block boundaries: the payload bits decoded so far and the
// shift at which the next 7-bit group lands. shift_bits is a multiple of 7
// and at most 63 in any valid state; zero shift means no value in progress
// (and then partial_value is zero as well).
struct DecodeCarry {
  unsigned shift_bits = 0;
  std::uint64_t partial_value = 0;

  bool active() const noexcept { return shift_bits != 0; }
};

// How decode_adaptive picks its route.
struct DecodeConfig {
  bool scalar_only = false;
  // nullopt: use whatever detect_backend() reports.
  std::optional<PextBackendKind> force_backend;
};

namespace detail {

struct PortablePext {
  constexpr std::uint64_t operator()(std::uint64_t word,
                                     std::uint64_t mask) const noexcept {
    return pext64_portable(word, mask);
  }
};

#if defined(LEB128_HAVE_X86_PEXT)
struct HardwarePext {
  __attribute__((target("bmi2"))) std::uint64_t operator()(
      std::uint64_t word, std::uint64_t mask) const noexcept {
    return _pext_u64(word, mask);
  }
};
#endif

template <UnsignedWord T, class Pext, std::uint8_t Mval, std::size_t... J>
LEB128_ALWAYS_INLINE void write_block_values(std::uint64_t word, T* out,
                                             const DecodeCarry& carry,
                                             std::index_sequence<J...>) {
  constexpr CasePlan plan = derive_case(Mval);
  // The first completed value may have begun in an earlier block; its bits
  // slot in above the carried partial. Shifted-out bits wrap away, matching
  // the scalar decoder's width truncation.
  ((out[J] = static_cast<T>(
        J == 0 ? (Pext{}(word, plan.extracts[J].mask) << carry.shift_bits) |
                     carry.partial_value
               : Pext{}(word, plan.extracts[J].mask))),
   ...);
}

// Executes one block under the plan for Mval. Returns the advanced output
// cursor; updates carry and remaining in place.
template <UnsignedWord T, class Pext, std::uint8_t Mval>
LEB128_ALWAYS_INLINE T* run_block(std::uint64_t word, T* out,
                                  DecodeCarry& carry, std::uint64_t& remaining,
                                  std::size_t block_offset) {
  constexpr CasePlan plan = derive_case(Mval);
  if constexpr (plan.is_all_continuation) {
    carry.partial_value |= Pext{}(word, kPayloadMask6) << carry.shift_bits;
    carry.shift_bits += plan.trailing_shift;  // 42
    if (carry.shift_bits > kMaxDecodeShift<std::uint64_t>) {
      // Continuation run longer than any legal varint can recover from.
      throw MalformedVarint(block_offset);
    }
  } else {
    write_block_values<T, Pext, Mval>(
        word, out, carry, std::make_index_sequence<plan.completes_count>{});
    out += plan.completes_count;
    remaining -= plan.completes_count;
    if constexpr (plan.has_trailing) {
      carry.partial_value = Pext{}(word, plan.trailing_mask.mask);
      carry.shift_bits = plan.trailing_shift;
    } else {
      carry.partial_value = 0;
      carry.shift_bits = 0;
    }
  }
  return out;
}

}  // namespace detail

// Scalar continuation of the bulk loop. With an active carry, first finishes
// the in-flight value byte by byte at the carried shift; the rest decode
// through the scalar path. Returns {values decoded, bytes consumed past pos}.
template <UnsignedWord T>
DecodeResult tail_fallback(std::span<const std::uint8_t> buf, std::size_t pos,
                           DecodeCarry carry, std::uint64_t remaining, T* out) {
  const std::size_t start = pos;
  std::uint64_t done = 0;
  if (remaining > 0 && carry.active()) {
    std::uint64_t acc = carry.partial_value;
    while (true) {
      if (carry.shift_bits > kMaxDecodeShift<std::uint64_t>) {
        throw MalformedVarint(pos);
      }
      if (pos >= buf.size()) throw Truncated(pos);
      const std::uint8_t byte = buf[pos++];
      acc |= static_cast<std::uint64_t>(byte & 0x7fu) << carry.shift_bits;
      if (!(byte & 0x80u)) break;
      carry.shift_bits += 7;
    }
    *out++ = static_cast<T>(acc);
    ++done;
  }
  for (; done < remaining; ++done) {
    auto [value, length] = decode_one_at<T>(buf, pos);
    *out++ = value;
    pos += length;
  }
  return {done, pos - start};
}

namespace detail {

// The block loop is stamped once per (element type, PEXT backend). Computed
// goto cannot be inlined by GCC, so the hardware variants carry the bmi2
// target attribute directly instead of relying on an attributed wrapper.
#define LEB128_BULK_FN bulk_loop_sw
#define LEB128_BULK_T std::uint32_t
#define LEB128_BULK_PEXT PortablePext
#define LEB128_BULK_ATTRS
#include "leb128/detail/bulk_loop.inc"

#define LEB128_BULK_FN bulk_loop_sw
#define LEB128_BULK_T std::uint64_t
#define LEB128_BULK_PEXT PortablePext
#define LEB128_BULK_ATTRS
#include "leb128/detail/bulk_loop.inc"

#if defined(LEB128_HAVE_X86_PEXT)
#define LEB128_BULK_FN bulk_loop_hw
#define LEB128_BULK_T std::uint32_t
#define LEB128_BULK_PEXT HardwarePext
#define LEB128_BULK_ATTRS __attribute__((target("bmi2")))
#include "leb128/detail/bulk_loop.inc"

#define LEB128_BULK_FN bulk_loop_hw
#define LEB128_BULK_T std::uint64_t
#define LEB128_BULK_PEXT HardwarePext
#define LEB128_BULK_ATTRS __attribute__((target("bmi2")))
#include "leb128/detail/bulk_loop.inc"
#endif

}  // namespace detail

// Bulk-decodes exactly `count` values into `out` (out.size() >= count),
// producing the same values as decode_all_scalar on any well-formed stream.
// The backend is bound here, once; the block loop has no per-word dispatch.
template <UnsignedWord T>
DecodeResult decode_bulk(std::span<const std::uint8_t> bytes,
                         std::uint64_t count, const PextBackend& backend,
                         std::span<T> out) {
  if (out.size() < count) {
    throw std::invalid_argument("output capacity smaller than value count");
  }
  if (backend.kind == PextBackendKind::Hardware) {
#if defined(LEB128_HAVE_X86_PEXT)
    return detail::bulk_loop_hw(bytes, count, out.data());
#else
    throw ForcedUnavailable();
#endif
  }
  return detail::bulk_loop_sw(bytes, count, out.data());
}

template <UnsignedWord T>
DecodeResult decode_bulk(const EncodedStream& stream,
                         const PextBackend& backend, std::span<T> out) {
  if (stream.width != kWidthOf<T>) {
    throw std::invalid_argument("stream width does not match element type");
  }
  return decode_bulk<T>(stream.bytes, stream.count, backend, out);
}

// Routes to the scalar decoder or to decode_bulk with the configured
// backend; the output is identical either way.
template <UnsignedWord T>
DecodeResult decode_adaptive(const EncodedStream& stream,
                             const DecodeConfig& config, std::span<T> out) {
  if (stream.width != kWidthOf<T>) {
    throw std::invalid_argument("stream width does not match element type");
  }
  if (config.scalar_only) {
    const std::size_t consumed =
        decode_all_scalar<T>(stream.bytes, stream.count, out);
    return {stream.count, consumed};
  }
  return decode_bulk<T>(stream.bytes, stream.count,
                        detect_backend(config.force_backend), out);
}

}  // namespace leb128

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

// Decoding plans for the 64 six-bit continuation patterns of a block.
//
// The bulk decoder processes 6 bytes per step. PEXT over the byte MSBs
// compresses the six continuation flags into `mval`; bit i of mval is the
// continuation flag of byte i, so each zero bit marks a terminator and each
// terminator completes one integer whose payload spans from just past the
// previous terminator. The plans are derived from that rule instead of being
// transcribed case by case, and derivation is constexpr so the specialized
// block handlers compile down to fixed masks.

#include <array>
#include <bit>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace leb128 {

// Six-byte block geometry. A block is loaded as an 8-byte little-endian word;
// bytes 6 and 7 are never interpreted.
inline constexpr unsigned kBlockBytes = 6;
inline constexpr std::uint64_t kMsbMask6 = 0x0000808080808080ULL;
inline constexpr std::uint64_t kPayloadMask6 = 0x00007f7f7f7f7f7fULL;
inline constexpr unsigned kCaseCount = 64;

// Payload bits (low 7 of each byte) of the contiguous byte range
// [first, last], 0 <= first <= last <= 5.
struct ByteSpanMask {
  std::uint8_t first = 0;
  std::uint8_t last = 0;
  std::uint64_t mask = 0;
};

constexpr ByteSpanMask byte_span_mask(unsigned first, unsigned last) {
  std::uint64_t mask = 0;
  for (unsigned i = first; i <= last; ++i) {
    mask |= std::uint64_t{0x7f} << (8 * i);
  }
  return {static_cast<std::uint8_t>(first), static_cast<std::uint8_t>(last),
          mask};
}

// The decoding plan for one continuation pattern.
//
// extracts[0..completes_count) are the payload masks of the integers that
// terminate inside the block, in stream order; extracts[0] belongs to the
// integer that may have begun in an earlier block and is merged with the
// carry. A trailing continuation run that reaches the block end starts a new
// partial value (has_trailing), except for mval == 63 where the whole block
// extends an already-in-flight value (is_all_continuation).
struct CasePlan {
  std::uint8_t mval = 0;
  std::uint8_t completes_count = 0;
  std::array<ByteSpanMask, 6> extracts{};
  bool has_trailing = false;
  ByteSpanMask trailing_mask{};
  std::uint8_t trailing_shift = 0;  // 7 * run length; 42 for mval == 63
  bool is_all_continuation = false;
};

// Derives the plan for one mval. Terminator positions split the block into
// contiguous payload spans; whatever follows the last terminator becomes the
// trailing run.
constexpr CasePlan derive_case(std::uint8_t mval) {
  CasePlan plan;
  plan.mval = mval;
  if (mval == kCaseCount - 1) {
    plan.is_all_continuation = true;
    plan.trailing_mask = byte_span_mask(0, kBlockBytes - 1);
    plan.trailing_shift = 7 * kBlockBytes;  // 42
    return plan;
  }
  unsigned span_start = 0;
  for (unsigned i = 0; i < kBlockBytes; ++i) {
    if (((mval >> i) & 1u) == 0) {
      plan.extracts[plan.completes_count++] = byte_span_mask(span_start, i);
      span_start = i + 1;
    }
  }
  if (span_start < kBlockBytes) {
    plan.has_trailing = true;
    plan.trailing_mask = byte_span_mask(span_start, kBlockBytes - 1);
    plan.trailing_shift = static_cast<std::uint8_t>(7 * (kBlockBytes - span_start));
  }
  return plan;
}

using CaseTable = std::array<CasePlan, kCaseCount>;

constexpr CaseTable build_table() {
  CaseTable table{};
  for (unsigned m = 0; m < kCaseCount; ++m) {
    table[m] = derive_case(static_cast<std::uint8_t>(m));
  }
  return table;
}

inline constexpr CaseTable kCaseTable = build_table();

// Structural check of a table against the derivation rule's invariants:
// spans contiguous and anchored at the mval's zero bits, spans plus trailing
// partitioning the six payload bytes, counts and shift arithmetic consistent.
// Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate_table(const CaseTable& table) {
  std::vector<std::string> violations;
  auto complain = [&](unsigned m, const std::string& what) {
    violations.push_back("mval " + std::to_string(m) + ": " + what);
  };

  for (unsigned m = 0; m < kCaseCount; ++m) {
    const CasePlan& plan = table[m];
    if (plan.mval != m) complain(m, "plan indexed under wrong mval");

    const unsigned zero_bits = kBlockBytes - std::popcount(m & 0x3fu);
    if (m == kCaseCount - 1) {
      if (!plan.is_all_continuation) complain(m, "all-continuation flag clear");
      if (plan.completes_count != 0) complain(m, "completes_count not zero");
      if (plan.has_trailing) complain(m, "fresh trailing on all-continuation");
      if (plan.trailing_mask.mask != kPayloadMask6)
        complain(m, "continuation mask does not cover the whole block");
      if (plan.trailing_shift != 42) complain(m, "shift increment not 42");
      continue;
    }
    if (plan.is_all_continuation) complain(m, "all-continuation flag set");
    if (plan.completes_count != zero_bits)
      complain(m, "completes_count does not match terminator count");

    std::uint64_t covered = 0;
    unsigned expected_first = 0;
    for (unsigned j = 0; j < plan.completes_count && j < 6; ++j) {
      const ByteSpanMask& e = plan.extracts[j];
      if (e.first != expected_first)
        complain(m, "extract " + std::to_string(j) + " does not start after the previous terminator");
      if (e.first > e.last || e.last >= kBlockBytes) {
        complain(m, "extract " + std::to_string(j) + " span out of range");
        continue;
      }
      if ((m >> e.last) & 1u)
        complain(m, "extract " + std::to_string(j) + " does not end on a terminator byte");
      if (e.mask != byte_span_mask(e.first, e.last).mask)
        complain(m, "extract " + std::to_string(j) + " mask does not match its span");
      if (covered & e.mask)
        complain(m, "extract " + std::to_string(j) + " overlaps an earlier span");
      covered |= e.mask;
      expected_first = e.last + 1;
    }

    const bool expect_trailing = expected_first < kBlockBytes;
    if (plan.has_trailing != expect_trailing) {
      complain(m, expect_trailing ? "missing trailing run" : "unexpected trailing run");
    }
    if (plan.has_trailing) {
      const ByteSpanMask& t = plan.trailing_mask;
      if (t.first != expected_first || t.last != kBlockBytes - 1)
        complain(m, "trailing span misplaced");
      if (t.mask != byte_span_mask(t.first, kBlockBytes - 1).mask)
        complain(m, "trailing mask does not match its span");
      if (covered & t.mask) complain(m, "trailing overlaps an extract");
      covered |= t.mask;
      if (plan.trailing_shift != 7 * (kBlockBytes - t.first))
        complain(m, "trailing shift is not 7x the run length");
    } else if (plan.trailing_shift != 0) {
      complain(m, "trailing shift without a trailing run");
    }
    if (covered != kPayloadMask6)
      complain(m, "spans do not cover the six payload bytes");
  }
  return violations;
}

// One audit line per plan, e.g.
//   mval 45 0b101101 completes=2 extracts=[0x0000000000007f7f
//   0x0000007f7f7f0000] trailing=0x00007f0000000000 shift=7
inline std::string format_case(const CasePlan& plan) {
  std::ostringstream os;
  auto hex = [&os](std::uint64_t mask) {
    os << "0x" << std::hex << std::setw(16) << std::setfill('0') << mask
       << std::dec;
  };
  os << "mval " << std::setw(2) << static_cast<unsigned>(plan.mval) << " 0b";
  for (int i = kBlockBytes - 1; i >= 0; --i) os << ((plan.mval >> i) & 1u);
  os << " completes=" << static_cast<unsigned>(plan.completes_count);
  os << " extracts=[";
  for (unsigned j = 0; j < plan.completes_count; ++j) {
    if (j) os << ' ';
    hex(plan.extracts[j].mask);
  }
  os << ']';
  if (plan.is_all_continuation) {
    os << " continuation=";
    hex(plan.trailing_mask.mask);
    os << " shift+=" << static_cast<unsigned>(plan.trailing_shift);
  } else if (plan.has_trailing) {
    os << " trailing=";
    hex(plan.trailing_mask.mask);
    os << " shift=" << static_cast<unsigned>(plan.trailing_shift);
  } else {
    os << " shift=0";
  }
  return os.str();
}

}  // namespace leb128

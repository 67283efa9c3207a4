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

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "leb128/varint.hpp"
#include "test_util.hpp"

using namespace leb128;
using leb128::testing::random_mixed_values;
using leb128::testing::size_oracle;

namespace {

template <UnsignedWord T>
std::vector<std::uint8_t> encode_bytes(T value) {
  std::vector<std::uint8_t> out;
  encode_one(value, out);
  return out;
}

// 0, 2^(7k)-1 and 2^(7k) for k = 1..9, and the width maximum.
template <UnsignedWord T>
std::vector<T> boundary_values() {
  std::vector<T> values{0};
  for (unsigned k = 1; k <= 9; ++k) {
    const std::uint64_t edge = std::uint64_t{1} << (7 * k);
    if (edge - 1 <= static_cast<std::uint64_t>(~T{0})) values.push_back(static_cast<T>(edge - 1));
    if (edge <= static_cast<std::uint64_t>(~T{0})) values.push_back(static_cast<T>(edge));
  }
  values.push_back(~T{0});
  return values;
}

}  // namespace

TEST_CASE("encode_one emits little-endian 7-bit groups", "[varint]") {
  CHECK(encode_bytes<std::uint32_t>(0) == std::vector<std::uint8_t>{0x00});
  CHECK(encode_bytes<std::uint32_t>(127) == std::vector<std::uint8_t>{0x7f});
  CHECK(encode_bytes<std::uint32_t>(300) ==
        std::vector<std::uint8_t>{0xac, 0x02});
  CHECK(encode_bytes<std::uint64_t>(300) ==
        std::vector<std::uint8_t>{0xac, 0x02});

  std::vector<std::uint8_t> out;
  CHECK(encode_one<std::uint32_t>(300, out) == 2);
  CHECK(encode_one<std::uint64_t>(~std::uint64_t{0}, out) == 10);
}

TEST_CASE("decode_one_scalar inverts encode_one", "[varint]") {
  const std::vector<std::uint8_t> b300{0xac, 0x02};
  auto r = decode_one_scalar<std::uint32_t>(b300);
  CHECK(r.value == 300);
  CHECK(r.length == 2);

  const std::vector<std::uint8_t> b127{0x7f};
  auto r2 = decode_one_scalar<std::uint64_t>(b127);
  CHECK(r2.value == 127);
  CHECK(r2.length == 1);

  // Consumes through the first terminator and no further.
  const std::vector<std::uint8_t> extra{0xac, 0x02, 0x7f, 0x7f};
  CHECK(decode_one_scalar<std::uint32_t>(extra).length == 2);
}

TEST_CASE("decode_one_scalar rejects overlong continuation runs", "[varint]") {
  const std::vector<std::uint8_t> six{0x80, 0x80, 0x80, 0x80, 0x80, 0x01};
  CHECK_THROWS_AS(decode_one_scalar<std::uint32_t>(six), MalformedVarint);
  // The same bytes are fine at width 64.
  CHECK(decode_one_scalar<std::uint64_t>(six).value == std::uint64_t{1} << 35);

  std::vector<std::uint8_t> eleven(10, 0x80);
  eleven.push_back(0x01);
  CHECK_THROWS_AS(decode_one_scalar<std::uint64_t>(eleven), MalformedVarint);
}

TEST_CASE("decode_one_scalar reports truncation", "[varint]") {
  CHECK_THROWS_AS(decode_one_scalar<std::uint32_t>(std::vector<std::uint8_t>{}),
                  Truncated);
  CHECK_THROWS_AS(
      decode_one_scalar<std::uint64_t>(std::vector<std::uint8_t>{0x80, 0x80}),
      Truncated);
}

TEST_CASE("width-32 payload above bit 31 wraps away", "[varint]") {
  // 5th byte carries payload bits 28..34; bits 32+ are discarded on store.
  const std::vector<std::uint8_t> bytes{0x80, 0x80, 0x80, 0x80, 0x7f};
  auto r = decode_one_scalar<std::uint32_t>(bytes);
  CHECK(r.value == 0xf0000000u);
  CHECK(r.length == 5);
}

TEST_CASE("decode_all_scalar roundtrips and attaches offsets", "[varint]") {
  SECTION("small roundtrip") {
    std::vector<std::uint64_t> values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto stream = encode_stream<std::uint64_t>(values);
    CHECK(decode_all_scalar<std::uint64_t>(stream) == values);
  }
  SECTION("empty stream") {
    EncodedStream stream;
    stream.count = 0;
    stream.width = Width::u32;
    CHECK(decode_all_scalar<std::uint32_t>(stream).empty());
  }
  SECTION("random roundtrip, both widths") {
    auto v64 = random_mixed_values<std::uint64_t>(10000, 7001);
    auto s64 = encode_stream<std::uint64_t>(v64);
    CHECK(decode_all_scalar<std::uint64_t>(s64) == v64);
    CHECK(s64.bytes.size() == encoded_size_batch<std::uint64_t>(v64));

    auto v32 = random_mixed_values<std::uint32_t>(10000, 7002);
    auto s32 = encode_stream<std::uint32_t>(v32);
    CHECK(decode_all_scalar<std::uint32_t>(s32) == v32);
  }
  SECTION("error offset is absolute in the stream") {
    // One good varint, then a dangling continuation byte.
    std::vector<std::uint8_t> bytes{0x05, 0x80};
    std::vector<std::uint64_t> out(2);
    try {
      decode_all_scalar<std::uint64_t>(bytes, 2, std::span<std::uint64_t>(out));
      FAIL("expected Truncated");
    } catch (const Truncated& e) {
      CHECK(e.offset() == 2);
    }

    std::vector<std::uint8_t> overlong{0x05, 0x80, 0x80, 0x80, 0x80, 0x80, 0x01};
    std::vector<std::uint32_t> out32(2);
    try {
      decode_all_scalar<std::uint32_t>(overlong, 2, std::span<std::uint32_t>(out32));
      FAIL("expected MalformedVarint");
    } catch (const MalformedVarint& e) {
      CHECK(e.offset() == 1);
    }
  }
}

TEST_CASE("decode consumes between 1 and max_len bytes", "[varint]") {
  auto values = random_mixed_values<std::uint64_t>(2000, 11);
  for (auto v : values) {
    auto bytes = encode_bytes(v);
    auto r = decode_one_scalar<std::uint64_t>(bytes);
    CHECK(r.value == v);
    CHECK(r.length >= 1);
    CHECK(r.length <= kMaxEncodedLen<std::uint64_t>);
    CHECK(r.length == bytes.size());
  }
}

TEST_CASE("skip_varints lands after the n-th terminator", "[varint]") {
  SECTION("skip zero leaves the cursor alone") {
    std::vector<std::uint8_t> bytes{0x01, 0x02};
    CHECK(skip_varints(0, bytes) == 0);
  }
  SECTION("mixed lengths") {
    std::vector<std::uint64_t> values{300, 1, 70000, 5};
    auto stream = encode_stream<std::uint64_t>(values);
    CHECK(skip_varints(3, stream.bytes) == 6);  // 2 + 1 + 3
    CHECK(skip_varints(4, stream.bytes) == stream.bytes.size());
  }
  SECTION("two full word blocks") {
    std::vector<std::uint8_t> bytes(16, 0x01);
    CHECK(skip_varints(16, bytes) == 16);
  }
  SECTION("word loop handing a split varint to the byte loop") {
    std::vector<std::uint64_t> values(9, 300);  // 2 bytes each
    auto stream = encode_stream<std::uint64_t>(values);
    CHECK(skip_varints(9, stream.bytes) == 18);
  }
  SECTION("truncated input") {
    std::vector<std::uint8_t> bytes{0x01, 0x80};
    CHECK_THROWS_AS(skip_varints(2, bytes), Truncated);
    CHECK_THROWS_AS(skip_varints(3, bytes), Truncated);
  }
  SECTION("agreement with decode positions") {
    auto values = random_mixed_values<std::uint64_t>(500, 12);
    auto stream = encode_stream<std::uint64_t>(values);
    std::size_t pos = 0;
    for (std::size_t k = 0; k <= values.size(); ++k) {
      CHECK(skip_varints(k, stream.bytes) == pos);
      if (k < values.size()) pos += encoded_size(values[k]);
    }
  }
}

TEST_CASE("size lookup tables match the 7-bit grouping rule", "[varint]") {
  // Frozen expected tables.
  static constexpr std::uint8_t kExpected32[32] = {
      5, 5, 5, 5,
      4, 4, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3,
      2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1};
  for (unsigned i = 0; i < 32; ++i) CHECK(kSizeLut32[i] == kExpected32[i]);

  // Independent derivation: index i means 32-i (64-i) significant bits.
  for (unsigned i = 0; i < 32; ++i) {
    const unsigned bits = 32 - i;
    CHECK(kSizeLut32[i] == (bits + 6) / 7);
  }
  for (unsigned i = 0; i < 63; ++i) {
    const unsigned bits = 64 - i;
    CHECK(kSizeLut64[i] == (bits + 6) / 7);
  }
  CHECK(kSizeLut64[0] == 10);
  CHECK(kSizeLut64[63] == 1);
}

TEST_CASE("encoded_size equals the emitted length", "[varint]") {
  CHECK(encoded_size<std::uint32_t>(0) == 1);
  CHECK(encoded_size<std::uint32_t>(~std::uint32_t{0}) == 5);
  CHECK(encoded_size<std::uint64_t>(std::uint64_t{1} << 63) == 10);

  for (auto v : boundary_values<std::uint32_t>()) {
    CHECK(encoded_size(v) == encode_bytes(v).size());
    CHECK(encoded_size(v) == size_oracle(v));
    auto r = decode_one_scalar<std::uint32_t>(encode_bytes(v));
    CHECK(r.value == v);
    CHECK(r.length == encoded_size(v));
  }
  for (auto v : boundary_values<std::uint64_t>()) {
    CHECK(encoded_size(v) == encode_bytes(v).size());
    CHECK(encoded_size(v) == size_oracle(v));
    auto r = decode_one_scalar<std::uint64_t>(encode_bytes(v));
    CHECK(r.value == v);
    CHECK(r.length == encoded_size(v));
  }
}

TEST_CASE("encoded_size_batch sums per-value sizes", "[varint]") {
  CHECK(encoded_size_batch<std::uint32_t>(std::vector<std::uint32_t>{}) == 0);
  CHECK(encoded_size_batch<std::uint32_t>(
            std::vector<std::uint32_t>{0, 127, 128}) == 4);

  auto values = random_mixed_values<std::uint64_t>(1000, 13);
  auto stream = encode_stream<std::uint64_t>(values);
  CHECK(encoded_size_batch<std::uint64_t>(values) == stream.bytes.size());
}

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

// Deterministic benchmark workload generation and the .sfvi dataset format.
//
// w1 draws uniformly over the full element range. w2-w4 draw encoded byte
// lengths from fixed skewed mixes typical of varint data in the wild
// (dominated by 1-byte values), then a value uniformly within that length's
// range. Everything is seeded, so a (workload, width, count, seed) tuple
// pins the dataset bytes exactly.

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leb128/varint.hpp"

namespace leb128 {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DatasetError {
 public:
  explicit IoError(const std::string& what) : DatasetError("io error: " + what) {}
};
class BadMagic : public DatasetError {
 public:
  BadMagic() : DatasetError("bad dataset magic") {}
};
class BadVersion : public DatasetError {
 public:
  BadVersion() : DatasetError("unsupported dataset version") {}
};
class BadWidth : public DatasetError {
 public:
  BadWidth() : DatasetError("dataset width is neither 32 nor 64") {}
};
class LengthMismatch : public DatasetError {
 public:
  LengthMismatch() : DatasetError("dataset payload length mismatch") {}
};

class InvalidDistribution : public std::runtime_error {
 public:
  explicit InvalidDistribution(const std::string& what)
      : std::runtime_error("invalid length distribution: " + what) {}
};

// ---------------------------------------------------------------------------
// Length distributions
// ---------------------------------------------------------------------------

// Probability weights over encoded byte lengths. weights[L] is the weight of
// L-byte encodings, L in 1..10. Stored as given; sampling normalizes, so a
// table of rounded percentages that totals 100.01% (w2) or 99.99% (w3)
// needs no by-hand correction.
struct LengthDistribution {
  std::string name;
  std::array<double, 11> weights{};

  double weight_sum() const noexcept {
    double sum = 0;
    for (double w : weights) sum += w;
    return sum;
  }

  std::array<double, 11> normalized() const {
    const double sum = weight_sum();
    if (sum <= 0) throw InvalidDistribution(name + ": weights sum to zero");
    auto scaled = weights;
    for (double& w : scaled) w /= sum;
    return scaled;
  }

  // Throws InvalidDistribution when a positive weight sits on a length no
  // value of `width` can occupy.
  void validate(Width width) const {
    const std::size_t max_len = max_encoded_len(width);
    for (std::size_t len = 0; len < weights.size(); ++len) {
      if (weights[len] < 0) {
        throw InvalidDistribution(name + ": negative weight");
      }
      if (weights[len] > 0 && (len < 1 || len > max_len)) {
        throw InvalidDistribution(name + ": length " + std::to_string(len) +
                                  " impossible at width " +
                                  std::to_string(static_cast<unsigned>(width)));
      }
    }
    if (weight_sum() <= 0) throw InvalidDistribution(name + ": weights sum to zero");
  }
};

// The three built-in skewed length mixes.
inline std::vector<LengthDistribution> builtin_distributions() {
  std::vector<LengthDistribution> dists(3);
  dists[0].name = "w2";
  dists[0].weights[1] = 0.9008;
  dists[0].weights[2] = 0.0463;
  dists[0].weights[3] = 0.0322;
  dists[0].weights[4] = 0.0120;
  dists[0].weights[5] = 0.0088;
  dists[1].name = "w3";
  dists[1].weights[1] = 0.8122;
  dists[1].weights[2] = 0.0731;
  dists[1].weights[3] = 0.0616;
  dists[1].weights[4] = 0.0420;
  dists[1].weights[5] = 0.0110;
  dists[2].name = "w4";
  dists[2].weights[1] = 0.7213;
  dists[2].weights[2] = 0.1231;
  dists[2].weights[3] = 0.0853;
  dists[2].weights[4] = 0.0531;
  dists[2].weights[5] = 0.0172;
  return dists;
}

inline LengthDistribution builtin_distribution(std::string_view name) {
  for (auto& d : builtin_distributions()) {
    if (d.name == name) return d;
  }
  throw std::invalid_argument("unknown built-in distribution: " +
                              std::string(name));
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace detail {

// Exact uniform draw in [0, bound) via masked rejection; bound in [1, 2^63].
// Avoids std::uniform_int_distribution, whose output is not pinned across
// standard library implementations.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t mask = std::bit_ceil(bound) - 1;
  while (true) {
    const std::uint64_t r = eng() & mask;
    if (r < bound) return r;
  }
}

inline double unit_draw(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// `count` values drawn uniformly over the full range of T.
template <UnsignedWord T>
std::vector<T> gen_uniform(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<T> values(count);
  for (auto& v : values) v = static_cast<T>(eng());
  return values;
}

// Inclusive value range of exactly-L-byte encodings at width T.
template <UnsignedWord T>
constexpr std::pair<std::uint64_t, std::uint64_t> length_value_range(
    unsigned len) {
  const std::uint64_t lo = len == 1 ? 0 : std::uint64_t{1} << (7 * (len - 1));
  std::uint64_t hi = 7 * len >= 64 ? ~std::uint64_t{0}
                                   : (std::uint64_t{1} << (7 * len)) - 1;
  constexpr std::uint64_t max = static_cast<std::uint64_t>(~T{0});
  if (hi > max) hi = max;  // top length bucket clamps to the width maximum
  return {lo, hi};
}

// Per value: sample a length from `dist`, then a value uniformly within that
// length's range, so encoded_size(value) equals the sampled length.
template <UnsignedWord T>
std::vector<T> gen_by_lengths(std::uint64_t count,
                              const LengthDistribution& dist,
                              std::uint64_t seed) {
  dist.validate(kWidthOf<T>);
  const auto probs = dist.normalized();
  unsigned top = 1;
  std::array<double, 11> cumulative{};
  double running = 0;
  for (std::size_t len = 1; len < probs.size(); ++len) {
    running += probs[len];
    cumulative[len] = running;
    if (probs[len] > 0) top = static_cast<unsigned>(len);
  }
  // Absorb float residue in the heaviest length so the scan cannot walk past
  // the weighted buckets.
  cumulative[top] = 1.0;

  std::mt19937_64 eng(seed);
  std::vector<T> values(count);
  for (auto& v : values) {
    const double u = detail::unit_draw(eng);
    unsigned len = 1;
    while (len < top && u >= cumulative[len]) ++len;
    const auto [lo, hi] = length_value_range<T>(len);
    v = static_cast<T>(lo + detail::uniform_below(eng, hi - lo + 1));
  }
  return values;
}

// Generates a named workload: w1 uniform, w2-w4 by length distribution.
template <UnsignedWord T>
std::vector<T> generate_workload(std::string_view workload,
                                 std::uint64_t count, std::uint64_t seed) {
  if (workload == "w1") return gen_uniform<T>(count, seed);
  return gen_by_lengths<T>(count, builtin_distribution(workload), seed);
}

// ---------------------------------------------------------------------------
// Dataset files
// ---------------------------------------------------------------------------

// On-disk layout, little-endian, no padding:
//   magic "SFVI" | version u8 | width u8 | reserved u16 = 0 |
//   count u64 | seed u64 | payload_len u64 | LEB128 payload
inline constexpr char kDatasetMagic[4] = {'S', 'F', 'V', 'I'};
inline constexpr std::uint8_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderSize = 32;

struct DatasetHeader {
  Width width = Width::u64;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  std::uint64_t payload_len = 0;
};

struct Dataset {
  DatasetHeader header;
  EncodedStream stream;
};

namespace detail {

inline void put_le64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline std::uint64_t get_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};

}  // namespace detail

inline std::array<std::uint8_t, kDatasetHeaderSize> serialize_header(
    const DatasetHeader& header) {
  std::array<std::uint8_t, kDatasetHeaderSize> raw{};
  std::memcpy(raw.data(), kDatasetMagic, sizeof kDatasetMagic);
  raw[4] = kDatasetVersion;
  raw[5] = static_cast<std::uint8_t>(header.width);
  detail::put_le64(raw.data() + 8, header.count);
  detail::put_le64(raw.data() + 16, header.seed);
  detail::put_le64(raw.data() + 24, header.payload_len);
  return raw;
}

// Writes the header followed by the LEB128 encoding of `values`.
template <UnsignedWord T>
void write_dataset(const std::string& path, std::uint64_t seed,
                   std::span<const T> values) {
  EncodedStream stream = encode_stream(values);
  DatasetHeader header;
  header.width = kWidthOf<T>;
  header.count = stream.count;
  header.seed = seed;
  header.payload_len = stream.bytes.size();
  const auto raw = serialize_header(header);

  std::unique_ptr<std::FILE, detail::FileCloser> file(
      std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path + " for writing");
  if (std::fwrite(raw.data(), 1, raw.size(), file.get()) != raw.size()) {
    throw IoError("short write to " + path);
  }
  if (!stream.bytes.empty() &&
      std::fwrite(stream.bytes.data(), 1, stream.bytes.size(), file.get()) !=
          stream.bytes.size()) {
    throw IoError("short write to " + path);
  }
  if (std::fflush(file.get()) != 0) throw IoError("flush failed for " + path);
}

// Reads and validates a dataset; the payload is returned undecoded.
inline Dataset read_dataset(const std::string& path) {
  std::unique_ptr<std::FILE, detail::FileCloser> file(
      std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path + " for reading");

  std::array<std::uint8_t, kDatasetHeaderSize> raw{};
  if (std::fread(raw.data(), 1, raw.size(), file.get()) != raw.size()) {
    throw LengthMismatch();
  }
  if (std::memcmp(raw.data(), kDatasetMagic, sizeof kDatasetMagic) != 0) {
    throw BadMagic();
  }
  if (raw[4] != kDatasetVersion) throw BadVersion();
  if (raw[5] != 32 && raw[5] != 64) throw BadWidth();

  Dataset dataset;
  dataset.header.width = static_cast<Width>(raw[5]);
  dataset.header.count = detail::get_le64(raw.data() + 8);
  dataset.header.seed = detail::get_le64(raw.data() + 16);
  dataset.header.payload_len = detail::get_le64(raw.data() + 24);

  dataset.stream.bytes.resize(dataset.header.payload_len);
  if (dataset.header.payload_len > 0 &&
      std::fread(dataset.stream.bytes.data(), 1, dataset.header.payload_len,
                 file.get()) != dataset.header.payload_len) {
    throw LengthMismatch();
  }
  if (std::fgetc(file.get()) != EOF) throw LengthMismatch();
  dataset.stream.count = dataset.header.count;
  dataset.stream.width = dataset.header.width;
  return dataset;
}

}  // namespace leb128

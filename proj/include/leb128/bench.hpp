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

// Single-threaded decode throughput measurement. The dataset sits in memory
// and the output buffer is preallocated, so the timed region covers decoding
// only. One iteration decodes the whole dataset; the report carries the
// median over iterations.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "leb128/bulk_decode.hpp"
#include "leb128/varint.hpp"

namespace leb128 {

// Decoder under measurement.
enum class BenchAlgo { Scalar, BulkHardware, BulkPortable };

inline const char* to_string(BenchAlgo algo) noexcept {
  switch (algo) {
    case BenchAlgo::Scalar: return "scalar";
    case BenchAlgo::BulkHardware: return "bulk-hw";
    case BenchAlgo::BulkPortable: return "bulk-sw";
  }
  return "?";
}

struct BenchReport {
  std::string algo;          // scalar | bulk-hw | bulk-sw
  std::string workload;      // dataset label
  unsigned width = 64;       // 32 | 64
  std::uint64_t count = 0;
  unsigned iterations = 0;
  double ns_per_iter = 0;    // median over iterations
  double values_per_sec = 0;
  double bytes_per_sec = 0;
  std::string backend;       // hardware | portable | none
  std::uint64_t checksum = 0;  // wrapping sum of decoded values
};

inline constexpr std::string_view kCsvHeader =
    "algo,workload,width,count,iterations,ns_per_iter,values_per_sec,"
    "bytes_per_sec,backend,checksum";

inline std::string to_csv_row(const BenchReport& r) {
  std::ostringstream os;
  os << r.algo << ',' << r.workload << ',' << r.width << ',' << r.count << ','
     << r.iterations << ',' << r.ns_per_iter << ',' << r.values_per_sec << ','
     << r.bytes_per_sec << ',' << r.backend << ',' << r.checksum;
  return os.str();
}

// Median with the usual midpoint average for even sizes.
inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[mid];
  return (xs[mid - 1] + xs[mid]) / 2;
}

namespace detail {

template <UnsignedWord T>
std::uint64_t checksum_values(const std::vector<T>& values) noexcept {
  std::uint64_t sum = 0;
  for (T v : values) sum += v;
  return sum;
}

}  // namespace detail

// Runs `warmup` untimed plus `iterations` timed whole-dataset decodes.
// The checksum is computed outside the timed region; it must agree across
// algorithms on the same dataset, which also keeps the decode from being
// optimized out.
template <UnsignedWord T>
BenchReport run_bench(const EncodedStream& stream, BenchAlgo algo,
                      std::string_view workload_label, unsigned iterations,
                      unsigned warmup) {
  using clock = std::chrono::steady_clock;

  DecodeConfig config;
  switch (algo) {
    case BenchAlgo::Scalar:
      config.scalar_only = true;
      break;
    case BenchAlgo::BulkHardware:
      config.force_backend = PextBackendKind::Hardware;
      break;
    case BenchAlgo::BulkPortable:
      config.force_backend = PextBackendKind::Portable;
      break;
  }
  // Resolve the backend now so ForcedUnavailable surfaces before timing.
  if (!config.scalar_only) detect_backend(config.force_backend);

  std::vector<T> out(stream.count);
  std::vector<double> ns;
  ns.reserve(iterations);
  for (unsigned i = 0; i < warmup; ++i) {
    decode_adaptive<T>(stream, config, std::span<T>(out));
  }
  for (unsigned i = 0; i < iterations; ++i) {
    const auto start = clock::now();
    decode_adaptive<T>(stream, config, std::span<T>(out));
    const auto stop = clock::now();
    ns.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
  }

  BenchReport report;
  report.algo = to_string(algo);
  report.workload = std::string(workload_label);
  report.width = static_cast<unsigned>(stream.width);
  report.count = stream.count;
  report.iterations = iterations;
  report.ns_per_iter = median(ns);
  if (report.ns_per_iter > 0) {
    report.values_per_sec = static_cast<double>(stream.count) * 1e9 / report.ns_per_iter;
    report.bytes_per_sec =
        static_cast<double>(stream.bytes.size()) * 1e9 / report.ns_per_iter;
  }
  report.backend = config.scalar_only
                       ? "none"
                       : to_string(detect_backend(config.force_backend).kind);
  report.checksum = detail::checksum_values(out);
  return report;
}

}  // namespace leb128

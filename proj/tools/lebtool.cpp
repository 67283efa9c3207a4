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

// lebtool: generate benchmark datasets, verify decoder equivalence, measure
// decode throughput, and dump the bulk decoder's case table.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 environment error (unreadable/invalid dataset, forced backend missing).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leb128/leb128.hpp"

namespace {

using namespace leb128;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;

std::optional<PextBackendKind> parse_pext_flag(const std::string& flag) {
  if (flag == "hw") return PextBackendKind::Hardware;
  if (flag == "sw") return PextBackendKind::Portable;
  return std::nullopt;  // auto
}

// Exact uniform draw in [0, bound], for sampling skip prefixes.
std::uint64_t uniform_upto(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t mask =
      bound == 0 ? 0 : (std::bit_ceil(bound + (bound < ~std::uint64_t{0})) - 1);
  while (true) {
    const std::uint64_t r = eng() & mask;
    if (r <= bound) return r;
  }
}

struct GenOptions {
  std::string workload = "w1";
  unsigned width = 32;
  std::uint64_t count = 1000000;
  std::uint64_t seed = 42;
  std::string out;
};

int run_gen(const GenOptions& opt) {
  if (opt.width == 32) {
    const auto values =
        generate_workload<std::uint32_t>(opt.workload, opt.count, opt.seed);
    write_dataset<std::uint32_t>(opt.out, opt.seed, values);
  } else {
    const auto values =
        generate_workload<std::uint64_t>(opt.workload, opt.count, opt.seed);
    write_dataset<std::uint64_t>(opt.out, opt.seed, values);
  }
  std::cout << "wrote " << opt.out << ": workload=" << opt.workload
            << " width=" << opt.width << " count=" << opt.count
            << " seed=" << opt.seed << "\n";
  return kExitOk;
}

struct VerifyOptions {
  std::string input;
  std::string pext = "auto";
};

template <UnsignedWord T>
int verify_impl(const Dataset& ds, std::optional<PextBackendKind> force) {
  const EncodedStream& stream = ds.stream;

  // Scalar reference decode, recording every value's byte position for the
  // skip cross-check.
  std::vector<T> reference(stream.count);
  std::vector<std::size_t> positions(stream.count + 1);
  std::size_t pos = 0;
  try {
    for (std::uint64_t i = 0; i < stream.count; ++i) {
      positions[i] = pos;
      auto [value, length] = decode_one_at<T>(stream.bytes, pos);
      reference[i] = value;
      pos += length;
    }
    positions[stream.count] = pos;
  } catch (const CodecError& e) {
    std::cout << "FAIL: scalar decode: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  if (pos != stream.bytes.size()) {
    std::cout << "FAIL: decoded " << stream.count << " values in " << pos
              << " bytes but the payload holds " << stream.bytes.size() << "\n";
    return kExitVerifyFailed;
  }

  std::vector<PextBackend> backends;
  if (!force || *force == PextBackendKind::Portable) {
    backends.push_back(PextBackend{PextBackendKind::Portable, true});
  }
  if ((force && *force == PextBackendKind::Hardware) ||
      (!force && cpu_has_bmi2())) {
    backends.push_back(detect_backend(PextBackendKind::Hardware));
  }

  for (const auto& backend : backends) {
    const char* label =
        backend.kind == PextBackendKind::Hardware ? "bulk-hw" : "bulk-sw";
    std::vector<T> out(stream.count);
    try {
      decode_bulk<T>(stream, backend, std::span<T>(out));
    } catch (const CodecError& e) {
      std::cout << "FAIL: " << label << " decode: " << e.what() << "\n";
      return kExitVerifyFailed;
    }
    if (out != reference) {
      const auto mismatch =
          std::mismatch(out.begin(), out.end(), reference.begin());
      const auto index =
          static_cast<std::size_t>(mismatch.first - out.begin());
      std::cout << "FAIL: " << label << " diverges from scalar at value index "
                << index << " (byte offset " << positions[index] << ")\n";
      return kExitVerifyFailed;
    }
    std::cout << "ok: " << label << " matches scalar (" << stream.count
              << " values)\n";
  }

  std::mt19937_64 eng(ds.header.seed);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t k = uniform_upto(eng, stream.count);
    const std::size_t skipped = skip_varints(k, stream.bytes);
    if (skipped != positions[k]) {
      std::cout << "FAIL: skip_varints(" << k << ") landed at " << skipped
                << ", decoding lands at " << positions[k] << "\n";
      return kExitVerifyFailed;
    }
  }
  std::cout << "ok: skip positions match decode positions (100 prefixes)\n";
  std::cout << "PASS\n";
  return kExitOk;
}

int run_verify(const VerifyOptions& opt) {
  const Dataset ds = read_dataset(opt.input);
  const auto force = parse_pext_flag(opt.pext);
  return ds.header.width == Width::u32
             ? verify_impl<std::uint32_t>(ds, force)
             : verify_impl<std::uint64_t>(ds, force);
}

struct BenchOptions {
  std::string input;
  std::vector<std::string> algos;  // empty: all compatible with --pext
  unsigned iterations = 30;
  unsigned warmup = 3;
  std::string csv;  // path, "-" for stdout, empty for none
  std::string pext = "auto";
  std::string label;  // defaults to the input filename stem
};

std::optional<BenchAlgo> parse_algo(const std::string& name) {
  if (name == "scalar") return BenchAlgo::Scalar;
  if (name == "bulk-hw") return BenchAlgo::BulkHardware;
  if (name == "bulk-sw") return BenchAlgo::BulkPortable;
  return std::nullopt;
}

int run_bench(const BenchOptions& opt) {
  const Dataset ds = read_dataset(opt.input);
  const auto force = parse_pext_flag(opt.pext);

  std::vector<BenchAlgo> algos;
  if (opt.algos.empty()) {
    algos.push_back(BenchAlgo::Scalar);
    if (!force || *force == PextBackendKind::Hardware) {
      if (cpu_has_bmi2() || (force && *force == PextBackendKind::Hardware)) {
        algos.push_back(BenchAlgo::BulkHardware);
      }
    }
    if (!force || *force == PextBackendKind::Portable) {
      algos.push_back(BenchAlgo::BulkPortable);
    }
  } else {
    for (const auto& name : opt.algos) {
      const auto algo = parse_algo(name);
      if (!algo) {
        std::cerr << "unknown algorithm: " << name << "\n";
        return kExitUsage;
      }
      if ((*algo == BenchAlgo::BulkHardware && force &&
           *force == PextBackendKind::Portable) ||
          (*algo == BenchAlgo::BulkPortable && force &&
           *force == PextBackendKind::Hardware)) {
        std::cerr << "algorithm " << name << " contradicts --pext " << opt.pext
                  << "\n";
        return kExitUsage;
      }
      algos.push_back(*algo);
    }
  }

  const std::string label =
      opt.label.empty() ? std::filesystem::path(opt.input).stem().string()
                        : opt.label;

  std::vector<BenchReport> reports;
  for (BenchAlgo algo : algos) {
    const BenchReport report =
        ds.header.width == Width::u32
            ? run_bench<std::uint32_t>(ds.stream, algo, label, opt.iterations,
                                       opt.warmup)
            : run_bench<std::uint64_t>(ds.stream, algo, label, opt.iterations,
                                       opt.warmup);
    reports.push_back(report);
  }

  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].checksum != reports[0].checksum) {
      std::cout << "FAIL: checksum mismatch between " << reports[0].algo
                << " and " << reports[i].algo << "\n";
      return kExitVerifyFailed;
    }
  }

  std::printf("%-8s %-12s %6s %10s %14s %16s %10s\n", "algo", "workload",
              "width", "count", "ns/iter", "values/s", "backend");
  for (const auto& r : reports) {
    std::printf("%-8s %-12s %6u %10llu %14.0f %16.0f %10s\n", r.algo.c_str(),
                r.workload.c_str(), r.width,
                static_cast<unsigned long long>(r.count), r.ns_per_iter,
                r.values_per_sec, r.backend.c_str());
  }

  if (!opt.csv.empty()) {
    if (opt.csv == "-") {
      std::cout << kCsvHeader << "\n";
      for (const auto& r : reports) std::cout << to_csv_row(r) << "\n";
    } else {
      const bool fresh = !std::filesystem::exists(opt.csv) ||
                         std::filesystem::file_size(opt.csv) == 0;
      std::ofstream out(opt.csv, std::ios::app);
      if (!out) throw IoError("cannot open " + opt.csv + " for writing");
      if (fresh) out << kCsvHeader << "\n";
      for (const auto& r : reports) out << to_csv_row(r) << "\n";
    }
  }
  return kExitOk;
}

int run_dump_table() {
  for (const auto& plan : kCaseTable) {
    std::cout << format_case(plan) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEB128 varint dataset, verification and benchmark tool"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "generate a dataset file");
  gen->add_option("--workload", gen_opt.workload, "workload name")
      ->check(CLI::IsMember({"w1", "w2", "w3", "w4"}))
      ->required();
  gen->add_option("--width", gen_opt.width, "element width in bits")
      ->check(CLI::IsMember({32u, 64u}))
      ->required();
  gen->add_option("--count", gen_opt.count, "number of values")->required();
  gen->add_option("--seed", gen_opt.seed, "generator seed");
  gen->add_option("--out", gen_opt.out, "output path")->required();

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "cross-check scalar, bulk and skip paths on a dataset");
  verify->add_option("input", verify_opt.input, "dataset path")->required();
  verify->add_option("--pext", verify_opt.pext, "PEXT backend")
      ->check(CLI::IsMember({"auto", "hw", "sw"}))
      ->envname("LEBTOOL_PEXT");

  BenchOptions bench_opt;
  auto* bench =
      app.add_subcommand("bench", "measure decode throughput on a dataset");
  bench->add_option("input", bench_opt.input, "dataset path")->required();
  bench->add_option("--algos", bench_opt.algos,
                    "decoders to run (scalar, bulk-hw, bulk-sw)")
      ->delimiter(',');
  bench->add_option("--iterations", bench_opt.iterations,
                    "timed iterations per decoder")
      ->check(CLI::PositiveNumber);
  bench->add_option("--warmup", bench_opt.warmup, "untimed warmup iterations");
  bench->add_option("--csv", bench_opt.csv, "append CSV rows here ('-' for stdout)");
  bench->add_option("--pext", bench_opt.pext, "PEXT backend")
      ->check(CLI::IsMember({"auto", "hw", "sw"}))
      ->envname("LEBTOOL_PEXT");
  bench->add_option("--label", bench_opt.label, "workload label for reports");

  auto* dump =
      app.add_subcommand("dump-table", "print all 64 block decoding plans");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_opt);
    if (verify->parsed()) return run_verify(verify_opt);
    if (bench->parsed()) return run_bench(bench_opt);
    if (dump->parsed()) return run_dump_table();
  } catch (const ForcedUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitUsage;
}

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

// 64-bit parallel bit extract (PEXT): the hardware BMI2 instruction when the
// CPU has it, and a bit-exact portable fallback otherwise. Both backends
// gather the bits of `word` selected by `mask` into the low-order result
// bits, in ascending mask-bit order.

#include <cstdint>
#include <optional>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <cpuid.h>
#include <immintrin.h>
#define LEB128_HAVE_X86_PEXT 1
#endif

namespace leb128 {

enum class PextBackendKind { Hardware, Portable };

// Resolved PEXT backend. Hardware is selectable only on CPUs reporting BMI2.
struct PextBackend {
  PextBackendKind kind = PextBackendKind::Portable;
  bool forced = false;  // chosen by configuration rather than detection
};

// Configuration demanded the hardware backend on a CPU without BMI2.
class ForcedUnavailable : public std::runtime_error {
 public:
  ForcedUnavailable()
      : std::runtime_error(
            "hardware PEXT backend forced but BMI2 is not available") {}
};

inline bool cpu_has_bmi2() noexcept {
#if defined(LEB128_HAVE_X86_PEXT)
  return __builtin_cpu_supports("bmi2");
#else
  return false;
#endif
}

// Set-bit iteration over the mask; result bit j mirrors the word bit under
// the j-th lowest set mask bit.
constexpr std::uint64_t pext64_portable(std::uint64_t word,
                                        std::uint64_t mask) noexcept {
  std::uint64_t out = 0;
  for (std::uint64_t bit = 1; mask != 0; mask &= mask - 1, bit <<= 1) {
    if (word & mask & (0 - mask)) out |= bit;
  }
  return out;
}

#if defined(LEB128_HAVE_X86_PEXT)
__attribute__((target("bmi2"))) inline std::uint64_t pext64_hw(
    std::uint64_t word, std::uint64_t mask) noexcept {
  return _pext_u64(word, mask);
}
#endif

// Convenience dispatcher. The bulk decoder does not use this; it binds the
// backend once at instantiation so the hot loop carries no per-word branch.
inline std::uint64_t pext64(const PextBackend& backend, std::uint64_t word,
                            std::uint64_t mask) {
#if defined(LEB128_HAVE_X86_PEXT)
  if (backend.kind == PextBackendKind::Hardware) return pext64_hw(word, mask);
#else
  (void)backend;
#endif
  return pext64_portable(word, mask);
}

// Hardware iff the CPU reports BMI2 and `force` does not demand otherwise.
// Throws ForcedUnavailable when Hardware is forced without BMI2.
inline PextBackend detect_backend(
    std::optional<PextBackendKind> force = std::nullopt) {
  if (force.has_value()) {
    if (*force == PextBackendKind::Hardware && !cpu_has_bmi2()) {
      throw ForcedUnavailable();
    }
    return {*force, true};
  }
  return {cpu_has_bmi2() ? PextBackendKind::Hardware
                         : PextBackendKind::Portable,
          false};
}

// True when PEXT executes natively: Intel since Haswell, AMD since Zen 3.
// Zen 1/2 report BMI2 but run PEXT/PDEP in microcode at 18-300 cycle
// latency, where the portable path or scalar decoding can win.
inline bool pext_is_native_fast() noexcept {
#if defined(LEB128_HAVE_X86_PEXT)
  if (!cpu_has_bmi2()) return false;
  unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (!__get_cpuid(0, &eax, &ebx, &ecx, &edx)) return false;
  const bool intel =
      ebx == 0x756e6547u && edx == 0x49656e69u && ecx == 0x6c65746eu;
  const bool amd =
      ebx == 0x68747541u && edx == 0x69746e65u && ecx == 0x444d4163u;
  if (intel) return true;
  if (!amd) return false;
  if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
  unsigned family = (eax >> 8) & 0xf;
  if (family == 0xf) family += (eax >> 20) & 0xff;
  return family >= 0x19;  // Zen 3
#else
  return false;
#endif
}

inline const char* to_string(PextBackendKind kind) noexcept {
  return kind == PextBackendKind::Hardware ? "hardware" : "portable";
}

}  // namespace leb128

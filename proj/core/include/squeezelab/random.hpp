// Copyright 2026 The SqueezeLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Counter-based random streams.
 *
 * Every random draw in the library comes from Philox4x32-10 keyed by the
 * 64-bit master seed, with the 128-bit counter laid out as
 *
 *   word 0: block index within the stream
 *   word 1: window index
 *   word 2: trial index
 *   word 3: stream domain (what the numbers are used for)
 *
 * so any (seed, trial, window) stream can be regenerated independently of
 * how trials are scheduled across threads. Uniforms take 53 bits from two
 * output words; normals use Box-Muller. Neither depends on the standard
 * library's distribution implementations, which are not portable.
 */

#pragma once

#include <array>
#include <cstdint>

namespace squeezelab {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer, used to derive sub-seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent seed for a labelled sub-experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

enum class StreamDomain : std::uint32_t {
    ScanSamples = 1,
    ScanPhases = 2,
    Dhd = 3,
    Drift = 4,
    TraceWindow = 5,
    TraceTail = 6,
};

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, StreamDomain domain, std::uint32_t trial = 0,
                 std::uint32_t window = 0) noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal.
    double normal() noexcept;

  private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace squeezelab

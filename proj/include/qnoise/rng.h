// Copyright 2026 The QNoise Authors
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

#ifndef QNOISE_RNG_H
#define QNOISE_RNG_H

#include <cstdint>

namespace qnoise {

/// SplitMix64 finalizer applied to x + 0x9E3779B97F4A7C15.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), so results do not depend on platform, thread
/// count, or call order.
///
///   raw(seed, stream, index) =
///       splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)
///   uniform = (raw >> 11) * 2^-53   in [0, 1)
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    }

    static std::uint64_t raw_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
    static double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

    /// Next raw 64-bit draw; advances the counter.
    std::uint64_t next_raw();
    /// Next uniform double in [0, 1).
    double next_uniform();
    /// Next uniform double in [lo, hi).
    double next_uniform(double lo, double hi);
    /// Next integer uniform in [0, bound) via floor(u * bound). bound > 0.
    std::uint64_t next_below(std::uint64_t bound);

    std::uint64_t counter() const { return counter_; }

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// Stream ids reserved for each consumer of randomness.
namespace streams {
inline constexpr std::uint64_t kRandomKGates = 1;
inline constexpr std::uint64_t kRandomKQubits = 2;
inline constexpr std::uint64_t kCrosstalkAngles = 3;
inline constexpr std::uint64_t kRandomCircuit = 4;
inline constexpr std::uint64_t kFuzz = 5;
/// Trajectory sample s uses stream kTrajectoryBase + s.
inline constexpr std::uint64_t kTrajectoryBase = std::uint64_t{1} << 32;
}  // namespace streams

}  // namespace qnoise

#endif

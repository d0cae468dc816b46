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

#include "qnoise/rng.h"

#include <algorithm>

namespace qnoise {

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::raw_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

double CounterRng::uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(raw_at(seed, stream, index) >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_raw() {
    return raw_at(seed_, stream_, counter_++);
}

double CounterRng::next_uniform() {
    return uniform_at(seed_, stream_, counter_++);
}

double CounterRng::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
    const auto k = static_cast<std::uint64_t>(next_uniform() * static_cast<double>(bound));
    return std::min(k, bound - 1);
}

}  // namespace qnoise

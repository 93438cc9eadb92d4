// Copyright 2026 The discoq authors
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

#include <cstdint>
#include <random>

namespace discoq {

/// splitmix64 finalizer. Used to derive well-separated stream seeds from a
/// base seed plus context tags, so that e.g. every Gram entry or every
/// (sentence, step) pair gets its own reproducible RNG stream.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return mix64(mix64(base) ^ mix64(a ^ 0xa5a5a5a5a5a5a5a5ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

/// Uniform double in [0, 1) with exactly 53 random bits. The mapping is pinned
/// here (rather than using std::uniform_real_distribution, whose output is
/// implementation-defined) so that seeded runs stay reproducible.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform double in [0, range).
inline double uniform(std::mt19937_64& g, double range) {
    return uniform01(g) * range;
}

/// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = 0xffffffffffffffffULL - 0xffffffffffffffffULL % n;
    std::uint64_t v = g();
    while (v >= limit) v = g();
    return v % n;
}

}  // namespace discoq

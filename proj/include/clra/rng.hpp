// SPDX-License-Identifier: Apache-2.0
//
// clra - cross-linked rotatable antenna array simulation and optimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CLRA_RNG_HPP
#define CLRA_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace clra {

// SplitMix64 step; used both as a stream mixer and to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Folds a list of keys into one well-mixed 64-bit seed. Used to derive
// independent substreams (per trial, per scheme, per GA individual) from a
// master seed so that results do not depend on evaluation order.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t k : keys) {
        s ^= k + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
        s = splitmix64(s);
    }
    return splitmix64(s);
}

// Deterministic random stream with explicit substream derivation. The
// uniform/gaussian draws are implemented on top of the raw 64-bit output so
// that sequences are identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    Rng substream(std::uint64_t key) const { return Rng(mix_seed({seed_, key})); }
    Rng substream(std::uint64_t key1, std::uint64_t key2) const {
        return Rng(mix_seed({seed_, key1, key2}));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive, bias-free by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = std::uint64_t(hi - lo) + 1ULL;
        if (span == 0ULL) // full 64-bit range
            return std::int64_t(next_u64());
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return lo + std::int64_t(draw % span);
    }

    // Standard normal via Box-Muller; consumes two uniforms per call.
    double gaussian() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> gaussian_complex() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-std::log(u1)); // variance 1/2 per part
        return {mag * std::cos(2.0 * M_PI * u2), mag * std::sin(2.0 * M_PI * u2)};
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace clra

#endif

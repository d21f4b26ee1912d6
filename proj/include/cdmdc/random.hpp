/*
 Copyright 2026 The cdmdc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

// Portable seeded random streams.
//
// The bit generator is xoshiro256** (Blackman & Vigna), seeded through
// SplitMix64. Distributions are implemented here rather than taken from
// <random>, whose distribution algorithms are implementation-defined and so
// not reproducible across standard libraries.
//
// Stream splitting: Rng(seed, stream) gives an independent stream for each
// (seed, stream) pair. Ensembles use stream = realization index; measurement
// matrices use stream = row index so any row can be regenerated on its own.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace cdmdc {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a master seed and a stream index into one 64-bit stream key.
inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = stream ^ 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(t);
    std::uint64_t k = a ^ (b * 0x9e3779b97f4a7c15ULL);
    return splitmix64(k);
}

namespace detail {

struct ZigguratTables {
    std::array<std::int64_t, 128> k{};
    std::array<double, 128> w{};
    std::array<double, 128> f{};

    ZigguratTables() {
        constexpr double m1 = 2147483648.0;  // 2^31
        constexpr double vn = 9.91256303526217e-3;
        double dn = 3.442619855899;
        double tn = dn;
        const double q = vn / std::exp(-0.5 * dn * dn);
        k[0] = static_cast<std::int64_t>((dn / q) * m1);
        k[1] = 0;
        w[0] = q / m1;
        w[127] = dn / m1;
        f[0] = 1.0;
        f[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            k[i + 1] = static_cast<std::int64_t>((dn / tn) * m1);
            tn = dn;
            f[i] = std::exp(-0.5 * dn * dn);
            w[i] = dn / m1;
        }
    }
};

inline const ZigguratTables& ziggurat() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace detail

/// xoshiro256** with the distributions the library needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
        std::uint64_t sm = stream_key(seed, stream);
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform01() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Fair coin.
    bool coin() noexcept { return (next() >> 63) != 0; }

    /// Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard normal deviate (Marsaglia-Tsang ziggurat, 128 layers). The
    /// layer index and the magnitude come from disjoint bits of one draw.
    double normal() noexcept {
        const auto& z = detail::ziggurat();
        const std::uint64_t u = next();
        const int iz = static_cast<int>(u & 127U);
        const auto hz = static_cast<std::int64_t>(static_cast<std::int32_t>(u >> 32));
        if ((hz < 0 ? -hz : hz) < z.k[iz]) return static_cast<double>(hz) * z.w[iz];
        return normal_tail(hz, iz);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    double normal_tail(std::int64_t hz, int iz) noexcept {
        const auto& z = detail::ziggurat();
        constexpr double r = 3.442620;
        for (;;) {
            const double x = static_cast<double>(hz) * z.w[iz];
            if (iz == 0) {
                double xt, yt;
                do {
                    xt = -std::log(uniform01()) * 0.2904764;
                    yt = -std::log(uniform01());
                } while (yt + yt < xt * xt);
                return hz > 0 ? r + xt : -r - xt;
            }
            if (z.f[iz] + uniform01() * (z.f[iz - 1] - z.f[iz]) < std::exp(-0.5 * x * x)) return x;
            const std::uint64_t u = next();
            iz = static_cast<int>(u & 127U);
            hz = static_cast<std::int64_t>(static_cast<std::int32_t>(u >> 32));
            if ((hz < 0 ? -hz : hz) < z.k[iz]) return static_cast<double>(hz) * z.w[iz];
        }
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace cdmdc

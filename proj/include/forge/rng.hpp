// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

namespace forge {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stateless hash of an ordered key tuple, used to derive independent streams.
constexpr std::uint64_t hash_seed(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x6A09E667F3BCC909ull;
    for (std::uint64_t k : keys) h = mix64(h ^ mix64(k));
    return h;
}

/// PCG32 (XSH-RR). Platform independent, so every draw is reproducible bit for bit.
class Rng {
public:
    constexpr explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : inc_((mix64(stream) << 1u) | 1u) {
        next_u32();
        state_ += mix64(seed);
        next_u32();
    }

    constexpr std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ull + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    constexpr std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32u) | next_u32();
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    constexpr double uniform() {
        return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive), unbiased by rejection.
    constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1u;
        if (range == 0) return static_cast<std::int64_t>(next_u64());
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return lo + static_cast<std::int64_t>(v % range);
    }

    friend constexpr bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

}  // namespace forge

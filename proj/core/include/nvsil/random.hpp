// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nvsil {

// std::mt19937_64 output is fixed by the standard; the distribution helpers
// below are written out so that streams are identical across standard
// libraries.
using Engine = std::mt19937_64;

/// Engine for substream `index` of a run seeded with `seed`.
inline Engine make_engine(std::uint64_t seed, std::uint64_t index = 0)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
    };
    return Engine{seq};
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential waiting time with the given rate (> 0).
inline double exponential(Engine& rng, double rate)
{
    return -std::log1p(-uniform01(rng)) / rate;
}

inline bool bernoulli(Engine& rng, double p)
{
    return uniform01(rng) < p;
}

} // namespace nvsil

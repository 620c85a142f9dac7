#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cges::detail {

/// Uniform double in [0, 1) from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) for bound >= 1.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(bound));
    return i < bound ? i : bound - 1;
}

}  // namespace cges::detail

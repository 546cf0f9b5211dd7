#pragma once

#include <cstdint>
#include <random>

namespace sflda {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for substream (index, stream) of a master seed; independent of evaluation order.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) noexcept {
    return mix64(mix64(mix64(master) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

}  // namespace sflda

#pragma once

#include <cstdint>
#include <random>

namespace gbary {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed tags for the stochastic components of one run.
namespace seed_tag {
inline constexpr std::uint64_t stream = 1;
inline constexpr std::uint64_t annealing = 2;
inline constexpr std::uint64_t representatives = 3;
inline constexpr std::uint64_t cluster_estimation = 4;
inline constexpr std::uint64_t upscale_stage = 5;
inline constexpr std::uint64_t multiscale_stage = 6;
inline constexpr std::uint64_t partition = 7;
} // namespace seed_tag

} // namespace gbary

#pragma once

#include <cstdint>
#include <random>

namespace pam {

/// SplitMix64 step; advances the state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent generator for worker `index` of a run seeded with `seed`.
/// The same (seed, index) pair always yields the same stream.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Default seed used whenever none is configured.
inline constexpr std::uint64_t kDefaultSeed = 20240601ULL;

}  // namespace pam

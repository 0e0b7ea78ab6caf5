#pragma once

#include <cstdint>
#include <random>

#include "curvhom/linalg.hpp"

namespace curvhom {

using Rng = std::mt19937_64;

/// One SplitMix64 step; advances state.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent generator for task `index` under a run-level seed. Parallel
/// work derives its stream from (seed, index), never from scheduling order.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [lo, hi) from the top 53 bits of one draw, so values
/// are identical across standard libraries.
double uniform(Rng& rng, double lo, double hi);

Vector uniform_vector(Rng& rng, int n, double lo, double hi);

}  // namespace curvhom

#pragma once

#include <cstdint>
#include <random>

#include "typgraph/core.hpp"

namespace typgraph {

/// mt19937_64 is fully specified by the standard, so seeded streams are
/// reproducible across toolchains. Only the engine from <random> is used;
/// the distributions there are implementation-defined.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the independent stream (master, index, lane).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t lane = 0);

/// Uniform integer in [0, bound); bound > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
BigInt uniform_below(Rng& rng, const BigInt& bound);

}  // namespace typgraph

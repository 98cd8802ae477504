#pragma once

#include <cstdint>
#include <random>

namespace bgp {

std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based stream derivation: the generator for (master_seed, stream)
/// is independent of how many other streams exist or in which order they are
/// drawn, so parallel trial execution stays deterministic.
std::mt19937_64 stream_rng(std::uint64_t master_seed, std::uint64_t stream);

/// Sub-stream derivation for nested counters (e.g. sweep point x trial).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace bgp

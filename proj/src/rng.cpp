#include "bgp/rng.hpp"

namespace bgp {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a,
                          std::uint64_t b) {
  std::uint64_t state = master_seed;
  std::uint64_t seed = splitmix64(state);
  state ^= a * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  seed ^= splitmix64(state);
  state ^= b * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL;
  seed ^= splitmix64(state);
  return seed;
}

std::mt19937_64 stream_rng(std::uint64_t master_seed, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(master_seed, stream));
}

}  // namespace bgp

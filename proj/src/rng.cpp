#include "typgraph/rng.hpp"

namespace typgraph {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t lane) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ (lane * 0xd1b54a32d192ed03ULL));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw InputError("uniform_below: empty range");
  }
  // Reject the low sliver that would bias r % bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

BigInt uniform_below(Rng& rng, const BigInt& bound) {
  if (bound <= 0) {
    throw InputError("uniform_below: empty range");
  }
  if (bound <= std::numeric_limits<std::uint64_t>::max()) {
    return BigInt(uniform_below(rng, bound.convert_to<std::uint64_t>()));
  }
  const auto bits = boost::multiprecision::msb(bound) + 1;
  const auto words = (bits + 63) / 64;
  const auto excess = words * 64 - bits;
  for (;;) {
    BigInt candidate = 0;
    for (std::size_t w = 0; w < words; ++w) {
      candidate <<= 64;
      candidate |= rng();
    }
    candidate >>= excess;
    if (candidate < bound) return candidate;
  }
}

}  // namespace typgraph

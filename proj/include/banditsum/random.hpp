#ifndef BANDITSUM_RANDOM_HPP
#define BANDITSUM_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace banditsum {

/// Every random stream in the library is a 64-bit Mersenne twister. The
/// helpers below avoid the standard distributions, whose algorithms are
/// implementation-defined, so seeded runs reproduce across toolchains.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Requires n > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

/// Independent stream derived from a run seed and a stream label.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace banditsum

#endif  // BANDITSUM_RANDOM_HPP

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace modwalk {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless seed derivation: replicate `index` of stream `tag` under
/// `master` can be reproduced without generating its predecessors.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t tag) noexcept {
  return mix64(mix64(mix64(master) ^ index) ^ (tag * 0xd1b54a32d192ed03ULL));
}

/// Stream tags used by the library. Distinct tags keep, e.g., the walk
/// and the coupling auxiliaries of the same replicate independent.
namespace stream {
inline constexpr std::uint64_t kReplicate = 1;
inline constexpr std::uint64_t kGaussianPath = 2;
inline constexpr std::uint64_t kCouplingAux = 3;
inline constexpr std::uint64_t kMonteCarloSeries = 4;
inline constexpr std::uint64_t kLil = 5;
}  // namespace stream

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    // splitmix64 sequence, as recommended for seeding xoshiro.
    for (std::uint64_t i = 0; i < 4; ++i) {
      state_[i] = mix64(seed + i * 0x9e3779b97f4a7c15ULL);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; one draw per call, no cached state.
  double normal() noexcept {
    const double u1 = 1.0 - uniform01();  // (0,1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

using Rng = Xoshiro256pp;

}  // namespace modwalk

#pragma once

// Pinned pseudo-random generator. Every trial draws from its own substream
// keyed by (seed, index), so results are bitwise reproducible for a seed no
// matter how trials are sharded across threads.
//
// Algorithm (version 1, do not change without bumping kRngVersion):
//   key    = mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15))
//   state  = four successive SplitMix64 outputs starting from key
//   output = xoshiro256** (Blackman & Vigna 2018)
//   uniform in (0, 1): ((x >> 11) + 0.5) * 2^-53

#include <array>
#include <cstdint>
#include <limits>

#include "archlab/distribution.hpp"

namespace archlab {

inline constexpr int kRngVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED2024ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

struct RngState {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t index = 0;
};

// xoshiro256** over a (seed, index) substream. Satisfies
// UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(RngState st) noexcept : RngStream(st.seed, st.index) {}
  RngStream(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t sm = mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15ULL));
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

// Inverse-cdf draw.
inline double sample(const Distribution& dist, RngStream& rng) { return dist.quantile(rng.uniform()); }

// Exponential(rate) draw by inversion.
inline double sample_exponential(double rate, RngStream& rng) { return -std::log(rng.uniform()) / rate; }

}  // namespace archlab

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace polyglue {

// Reproducible random stream: xoshiro256** seeded through SplitMix64.
//
// A stream is identified by (seed, stream_index). The four words of state
// are the first four outputs of SplitMix64 initialized with
// seed ^ (stream_index * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03), so
// distinct stream indices of the same master seed decorrelate through the
// SplitMix64 avalanche. All derived draws (uniform_below, uniform01,
// poisson) are implemented here rather than with <random> distributions so
// that identical (seed, stream_index) reproduce identical sequences on any
// platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_index_(stream_index) {
    std::uint64_t x =
        seed ^ (stream_index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
    for (auto& word : state_) word = split_mix64(x);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased uniform draw in [0, n) via Lemire's multiply-with-rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be > 0");
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Knuth's product method; fine for the small rates used here.
  std::uint64_t poisson(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson: lambda must be > 0");
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  // Derived stream for replica `r` of a purpose-tagged family of draws.
  // Deterministic, collision-free for purpose < 2^24 and r < 2^40.
  static RngStream substream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t r) {
    return RngStream(seed, (purpose << 40) + r);
  }

 private:
  static std::uint64_t split_mix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_index_;
};

}  // namespace polyglue

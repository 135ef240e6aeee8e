#pragma once

#include <cstdint>
#include <limits>

namespace bell {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Small SplitMix64 generator. Satisfies UniformRandomBitGenerator so it can
/// drive the <random> distributions, but the library only uses uniform01().
class Rng {
public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// A keyed family of independent generators: one per trial index.
///
/// Every trial draws from its own generator derived from (seed, stream, trial),
/// so trials can be generated in any order or on any number of threads and
/// still reproduce the same values.
class RngStream {
public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  constexpr Rng trial(std::uint64_t index) const {
    std::uint64_t k = mix64(seed_ ^ 0x6A09E667F3BCC909ULL);
    k = mix64(k ^ (stream_ * 0x9E3779B97F4A7C15ULL + 0xBB67AE8584CAA73BULL));
    k = mix64(k ^ (index * 0xD1B54A32D192ED03ULL + 0x3C6EF372FE94F82BULL));
    return Rng(k);
  }

  constexpr std::uint64_t seed() const { return seed_; }
  constexpr std::uint64_t stream() const { return stream_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace bell

#pragma once

#include <cstdint>
#include <limits>

namespace enduse {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key for an independent stream addressed by (seed, a, b). The same triple always
/// yields the same stream, so work can be split across threads in any order.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  std::uint64_t k = mix64(seed + 0x9E3779B97F4A7C15ULL);
  k = mix64(k ^ (a * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  k = mix64(k ^ (b * 0xABC98388FB8FAC03ULL + 0x2545F4914F6CDD1DULL));
  return k;
}

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it also drives
/// <random> distributions in tests and fixtures.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::uint64_t key) noexcept : state_(key) {}
  RandomStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
      : state_(stream_key(seed, a, b)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// True with probability p. p <= 0 never fires, p >= 1 always fires.
  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace enduse

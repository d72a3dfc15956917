#pragma once

// Counter-based random streams. A stream is keyed by (seed, stream index) and
// draws are a pure function of (key, draw counter), so trial j of a simulation
// sees the same numbers no matter which worker runs it.

#include <cstdint>
#include <limits>

namespace prophet {

// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class StreamRng {
 public:
  using result_type = std::uint64_t;

  constexpr StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(mix64(seed) + kGolden * (stream + 1))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + kGolden * ++counter_); }

  constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Uniform on the open interval (0, 1) with 53 random bits.
template <class Urbg>
double uniform_open01(Urbg& rng) {
  static_assert(Urbg::max() == std::numeric_limits<std::uint64_t>::max() && Urbg::min() == 0,
                "uniform_open01 needs a full 64-bit generator");
  const std::uint64_t bits = static_cast<std::uint64_t>(rng()) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace prophet

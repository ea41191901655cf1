#pragma once

#include <cstdint>

namespace relsim {

// Counter-based 64-bit generator: the splitmix64 output function applied to
// a Weyl sequence seed + i*gamma. The i-th draw depends only on (seed, i),
// so streams are reproducible across platforms and can be sampled at random
// offsets.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return at(seed_, ++counter_); }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace relsim

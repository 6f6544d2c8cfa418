#pragma once

#include <cstdint>

namespace wakegate {

// SplitMix64. State advances by the 64-bit golden ratio and each output is
// run through a Stafford mix13 finalizer. Output is identical on every
// platform for a given seed, which is what every seeded stand-in and
// augmentation draw in this project relies on.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), built from the high 53 bits of next().
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-1,1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n) {
    uint64_t v = static_cast<uint64_t>(next_unit() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

 private:
  uint64_t state_;
};

// One stateless SplitMix64 step: advance x by the golden ratio and finalize.
inline uint64_t splitmix64_mix(uint64_t x) {
  uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Decorrelated per-item stream seed for (seed, index) pairs.
inline uint64_t derive_stream_seed(uint64_t seed, uint64_t index) {
  return splitmix64_mix(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace wakegate

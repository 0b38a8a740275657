#pragma once

#include <cstdint>
#include <random>

namespace locsched {

// All randomness in the toolkit flows through this wrapper so that a run is
// reproducible bit-for-bit from its seed. Draws map one engine word to one
// uniform double; none of the std distribution adaptors are used because
// their draw counts are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(seed ^ (stream * 0x9E3779B97F4A7C15ULL)) {}

  // Uniform double in [0, 1), 53 bits, exactly one engine word.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform index in [0, n). n must be >= 1.
  std::size_t uniform_index(std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace locsched

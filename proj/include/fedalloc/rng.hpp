#pragma once

#include <cmath>
#include <cstdint>

namespace fedalloc {

// splitmix64 stream. Self-contained so scenario generation produces the same
// bytes on every platform; std distributions do not promise that.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unit-mean exponential
  double exponential() { return -std::log1p(-uniform()); }

  // uniform integer in [lo, hi]
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

 private:
  uint64_t state_;
};

// Deterministic seed derivation for independent substreams.
inline uint64_t mix_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  auto fold = [](uint64_t h, uint64_t x) {
    h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
    return h ^ (h >> 31);
  };
  return fold(fold(fold(base, a), b), c);
}

}  // namespace fedalloc

#pragma once

#include <cstdint>

namespace dergm::detail {

// splitmix64 finalizer; the library's only source of randomness so results
// are bit-identical across platforms (std:: distributions are not).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double to_unit_double(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Minimal sequential generator built on the same mixer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double uniform() { return to_unit_double(next_u64()); }

  // Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection to kill modulo bias; at most a few retries.
    std::uint64_t limit = ~0ULL - (~0ULL % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

// Stateless per-dyad draw: independent of evaluation order, so sampling may
// be chunked arbitrarily without changing output.
inline double dyad_uniform(std::uint64_t seed, std::uint64_t graph_index,
                           std::uint64_t dyad_index) {
  std::uint64_t stream = mix64(seed ^ mix64(graph_index));
  return to_unit_double(mix64(stream ^ mix64(dyad_index + 1)));
}

}  // namespace dergm::detail

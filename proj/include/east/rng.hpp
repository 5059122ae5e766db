#pragma once

// Seed derivation and the two draws the simulator needs (uniform, normal).
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard; the transforms are written out here because the std
// distributions are implementation-defined.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace east::rng {

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of an independent stream for (purpose, a, b) under one root seed.
inline constexpr std::uint64_t stream_seed(std::uint64_t root, std::string_view purpose,
                                           std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = mix64(root ^ fnv1a(purpose));
  h = mix64(h ^ a);
  return mix64(h ^ b);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t root, std::string_view purpose, std::uint64_t a = 0, std::uint64_t b = 0)
      : engine_(stream_seed(root, purpose, a, b)) {}

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Box-Muller, one output per call (the sine branch is discarded).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace east::rng

#pragma once

// Reproducible random streams.
//
// Every stream is SplitMix64 used in counter mode: the i-th 64-bit value of the
// stream with seed s is mix(s + (i + 1) * 0x9E3779B97F4A7C15), where mix is the
// SplitMix64 finalizer. Uniform doubles take the top 53 bits; normals use the
// Box-Muller transform, consuming two uniforms per pair of normals. Sub-seeds
// for independent components are derived from a root seed and a text tag, so a
// reimplementation in another language reproduces the same numbers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace fdid {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Seed of the component named `tag` under `root`.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  return splitmix64_mix(root ^ fnv1a64(tag));
}

// Seed of the index-th member of a family (trial, channel, ...).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index) {
  return splitmix64_mix(derive_seed(root, tag) + index * 0x9E3779B97F4A7C15ULL);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return splitmix64_mix(seed_ + (++counter_) * kGolden); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Real and imaginary parts independent standard normals.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdid

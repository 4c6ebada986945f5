#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace cloudrank {

// SplitMix64 (Steele, Lea & Flood, OOPSLA 2014): 64-bit state, one output per
// step, full period 2^64. Used as the project-wide generator because seeding
// is a single word, independent streams are cheap to derive, and the output
// sequence depends on nothing but the seed, which is what the determinism
// contract needs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  // Uniform in the open interval (0, 1): top 53 bits, offset by half an ulp
  // so neither endpoint can be returned.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Basic (non-polar) Box-Muller transform. Consumes exactly two uniforms per
  // call, so streams advance at a fixed, scheduling-independent rate.
  double normal(double mean, double stddev) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  // The SplitMix64 output finalizer, usable on its own as an avalanche step.
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed plus context words
// (panel size, problem index, method index, ...). Each word is absorbed with
// an odd offset and avalanched, so changing any single word yields an
// unrelated stream.
inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = SplitMix64::finalize(seed ^ 0x6a09e667f3bcc909ull);
  for (std::uint64_t w : words) {
    h = SplitMix64::finalize(h ^ (w + 0x9e3779b97f4a7c15ull));
  }
  return h;
}

}  // namespace cloudrank

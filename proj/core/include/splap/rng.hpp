#pragma once

#include <cstdint>
#include <cmath>

namespace splap {

/**
 * Counter-based random stream: every draw is a pure function of (seed, counter),
 * so parallel workers can pull from disjoint counter ranges and still reproduce
 * the serial sequence exactly.  The mixing function is splitmix64, whose output
 * passes the usual statistical batteries and is stateless by construction.
 */
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t start_counter = 0)
      : seed_(seed), counter_(start_counter) {}

  /// Raw 64-bit draw at the current counter; advances the counter.
  std::uint64_t next_u64() { return mix(seed_, counter_++); }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box–Muller (uses two draws, discards the sine leg).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    // Guard the log: uniform() can return exactly 0.
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Stateless access: the k-th raw value of stream (seed, k).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Derive an independent child seed, e.g. one per parallel work item.
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t item) {
    return mix(seed ^ 0xa02bdbf7bb3c0a7full, item);
  }

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

} // namespace splap

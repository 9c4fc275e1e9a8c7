#pragma once

#include <cstdint>

namespace metadebate {

// SplitMix64 (Steele, Lea & Flood; the java.util.SplittableRandom finalizer).
// One 64-bit word of state, full-period, identical output on every platform.
// This is the generator behind all seeded draws in the library so that a seed
// recorded in a run manifest reproduces the same assignments anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound). Modulo is fine here: bound is a handful of
  // agents, so the bias is on the order of 2^-61.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  // Draw in [lo, hi] inclusive.
  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double next_unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace metadebate

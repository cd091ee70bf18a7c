#pragma once

#include <cstdint>

namespace poscone {

/// SplitMix64 stream. Small state, passes BigCrush, and trivially
/// splittable: child streams are derived by hashing (seed, counter), which
/// keeps parallel trials order-independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

/// Counter-based child stream for trial t of a seeded experiment.
inline SplitMix64 child_rng(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mixer(seed ^ (0x517cc1b727220a95ULL * (stream + 1)));
  return SplitMix64(mixer.next_u64());
}

}  // namespace poscone

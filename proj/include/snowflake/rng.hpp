#pragma once

#include <cstdint>

namespace snowflake {

// SplitMix64 finalizer; the workhorse behind every random draw in the library.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based random stream. A stream is a pure function of the seed and the
/// chain of child tags, so any (scale, coordinate, index) slot can be drawn
/// independently, in any order, from any thread, with identical results.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

  SeedStream child(std::uint64_t tag) const {
    return SeedStream(Raw{}, mix64(key_ ^ (tag * kGamma + 0x94d049bb133111ebULL)));
  }

  std::uint64_t bits(std::uint64_t counter = 0) const { return mix64(key_ + counter * kGamma); }

  /// Uniform draw in [0, 1); bit-identical for identical (seed, tags, counter).
  double uniform(std::uint64_t counter = 0) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }

 private:
  struct Raw {};
  SeedStream(Raw, std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
};

// Stream tags; keeps modules from colliding on the same child chain.
enum StreamTag : std::uint64_t {
  kTagRadius = 1,
  kTagShift = 2,
  kTagPadding = 3,
  kTagBoundary = 4,
  kTagHeis = 5,
};

}  // namespace snowflake

#pragma once

#include <cstdint>
#include <random>

namespace mrepp {

/// Independent purposes that draw randomness from one replicate seed.
enum class Stream : std::uint64_t {
  kTrainLocations = 1,
  kTestLocations = 2,
  kLatentField = 3,
  kNoise = 4,
  kContamination = 5,
  kCalibration = 6,
  kSupportPoints = 7,
  kAuditDesign = 8,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for the sub-stream (stream, index) of a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(base ^ mix64(static_cast<std::uint64_t>(stream))) + index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
  return Rng(derive_seed(base, stream, index));
}

}  // namespace mrepp

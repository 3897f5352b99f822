#include "opgp/rng.hpp"

#include <cmath>
#include <numbers>

namespace opgp {

namespace {

/// SplitMix64 avalanche step (Steele, Lea & Flood's published constants).
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  // Hash the seed once so that nearby seeds give unrelated streams, then walk
  // the counter through the standard SplitMix64 sequence.
  const std::uint64_t h = splitmix64(splitmix64(seed) + index);
  // 53 high bits, shifted into (0, 1] so the log below is always finite.
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::normal_at(std::uint64_t index) const {
  const double u1 = uniform_at(seed, 2 * index);
  const double u2 = uniform_at(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace opgp

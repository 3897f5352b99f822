#pragma once

#include <cstdint>

namespace opgp {

/// Counter-based standard-normal stream.
///
/// Draw k of a stream with a given seed is a pure function of (seed, k):
/// normal_at(k) hashes (seed, 2k) and (seed, 2k + 1) to two uniforms with a
/// SplitMix64-style avalanche mix and applies Box-Muller.  Because draws are
/// addressed rather than sequenced, replicate r of a Monte Carlo run can be
/// assigned the index block [r*m, (r+1)*m) and computed in any order -- in
/// particular by OpenMP threads -- while remaining bit-identical to a serial
/// sweep.  Streams with different seeds are independent for all practical
/// purposes.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  /// The index-k standard normal of this stream (ignores counter).
  double normal_at(std::uint64_t index) const;

  /// Sequential draw: normal_at(counter) and advance.
  double next() { return normal_at(counter++); }

  /// Advance the counter without drawing (reserve a block of indices).
  void skip(std::uint64_t k) { counter += k; }
};

/// Uniform on (0, 1] addressed by (seed, index); building block of
/// NoiseStream, exposed for tests.
double uniform_at(std::uint64_t seed, std::uint64_t index);

}  // namespace opgp

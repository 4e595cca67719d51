#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace pens {

/// Counter-based random stream (Philox-2x64, 10 rounds).
///
/// All realizations of a Monte Carlo run share one master seed; realization r
/// draws from stream-id r. Identical (seed, stream-id) pairs reproduce
/// identical draws on any platform, and distinct stream-ids give statistically
/// independent sequences, so workers never need to coordinate.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via the Marsaglia polar method (no libm distribution
  /// state, so sequences are bit-reproducible across standard libraries).
  double normal();

  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> complex_normal();

 private:
  std::array<std::uint64_t, 2> philox_block(std::uint64_t block_index) const;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int block_pos_ = 2;  // force refill on first draw
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace pens

#include "pensemble/rng.hpp"

#include <cmath>

namespace pens {

namespace {

constexpr std::uint64_t kPhiloxMultiplier = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kWeylStep = 0x9E3779B97F4A7C15ULL;  // golden gamma

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += kWeylStep;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mix the master seed into the round key; the stream id enters through the
  // counter word, so every (seed, stream) pair addresses a disjoint sequence.
  std::uint64_t s = seed;
  key_ = splitmix64(s);
}

std::array<std::uint64_t, 2> RngStream::philox_block(
    std::uint64_t block_index) const {
  std::uint64_t x0 = block_index;
  std::uint64_t x1 = stream_id_;
  std::uint64_t key = key_;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi, lo;
    mulhilo64(kPhiloxMultiplier, x0, hi, lo);
    x0 = hi ^ key ^ x1;
    x1 = lo;
    key += kWeylStep;
  }
  return {x0, x1};
}

std::uint64_t RngStream::next_u64() {
  if (block_pos_ >= 2) {
    block_ = philox_block(block_index_++);
    block_pos_ = 0;
  }
  return block_[block_pos_++];
}

double RngStream::uniform() {
  // 53 high bits -> double in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_normal_ = true;
  return u * scale;
}

std::complex<double> RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

}  // namespace pens

#pragma once

#include <cstdint>

#include "kgre/numkit/tensor.hpp"

namespace kgre::numkit {

/// Counter-based splitmix64 generator. The sequence depends only on the seed,
/// so seeded runs reproduce bit-for-bit across platforms (no libstdc++
/// distribution internals involved).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Uniform in +-sqrt(6/(rows+cols)), the usual fan-balanced range for weights.
Tensor xavier_init(Rng& rng, int rows, int cols);

/// Uniform in [-scale, scale]; used for embedding rows.
Tensor uniform_init(Rng& rng, int rows, int cols, double scale);

}  // namespace kgre::numkit

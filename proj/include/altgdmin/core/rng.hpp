#pragma once

#include <cstdint>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin {

/// SplitMix64 finalizer. Used both as the stream update and to derive
/// independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic sub-stream seed for (seed, stream). Distinct streams give
/// statistically independent sequences.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

/// SplitMix64 generator (pinned algorithm, v1: SplitMix64 counter stream,
/// uniforms from the top 53 bits, normals via the Marsaglia polar method).
/// Bit-reproducible for a fixed libm; never use a platform-default engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1): (k + 0.5) * 2^-53 with k the top 53 bits.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform in (-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  /// Standard normal draw (polar method; second draw of each pair cached).
  double next_gaussian();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// m x n matrix of i.i.d. standard normal entries, filled row-major from
/// Rng(seed). Pure function of (seed, m, n).
DenseMatrix gaussian_matrix(std::uint64_t seed, std::size_t m, std::size_t n);

/// Compressed handle for a Gaussian sketching matrix: stores (seed, m, n)
/// only and regenerates entries bit-identically on demand.
struct SeededGaussianOperator {
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;

  DenseMatrix materialize() const { return gaussian_matrix(seed, m, n); }
};

}  // namespace altgdmin

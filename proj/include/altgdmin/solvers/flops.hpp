#pragma once

#include <cstdint>

namespace altgdmin::flops {

// Closed-form per-kernel flop counts (multiply+add each counted once), so
// cost comparisons are reproducible across machines. These formulas are the
// single source of truth for every counter in the solvers.

inline std::uint64_t gemm(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  return 2 * m * k * n;
}

inline std::uint64_t gemv(std::uint64_t m, std::uint64_t n) {
  return 2 * m * n;
}

inline std::uint64_t dot(std::uint64_t n) { return 2 * n; }

/// MGS with one reorthogonalization pass: two projection sweeps + normalize.
inline std::uint64_t qr(std::uint64_t n, std::uint64_t r) {
  return 4 * n * r * r + 2 * n * r;
}

/// QR factor + apply Q^T + triangular solve.
inline std::uint64_t least_squares(std::uint64_t m, std::uint64_t r) {
  return qr(m, r) + 2 * m * r + r * r;
}

inline std::uint64_t axpy(std::uint64_t n) { return 2 * n; }

inline std::uint64_t cholesky(std::uint64_t n) { return n * n * n / 3 + 2 * n * n; }

struct Counter {
  std::uint64_t total = 0;
  void add(std::uint64_t f) { total += f; }
  void merge(const Counter& other) { total += other.total; }
};

}  // namespace altgdmin::flops

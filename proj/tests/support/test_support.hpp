#pragma once

// Shared helpers for the unit and acceptance suites. The spectral oracle here
// is intentionally independent of the library path (full symmetric Jacobi
// with eigenvectors vs. the library's power method).

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin::test {

/// Full eigen decomposition of a symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues descending with matching eigenvectors as columns.
struct SymEig {
  std::vector<double> values;
  DenseMatrix vectors;  // n x n, column i pairs with values[i]
};

inline SymEig jacobi_eig_full(DenseMatrix s) {
  const std::size_t n = s.rows();
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    scale = std::max(scale, std::abs(s.data()[i]));
  const double tol = 1e-15 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off = std::max(off, std::abs(s(p, q)));
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(s(p, q)) <= tol) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  SymEig out;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s(a, a) > s(b, b); });
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = s(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

/// Top-r left singular subspace of M via the Jacobi oracle on M M^T.
inline DenseMatrix top_left_singular_oracle(const DenseMatrix& m,
                                            std::size_t r) {
  DenseMatrix gram(m.rows(), m.rows());
  const DenseMatrix mt = m.transposed();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(j, k);
      gram(i, j) = s;
    }
  (void)mt;
  const SymEig eig = jacobi_eig_full(gram);
  DenseMatrix out(m.rows(), r);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < r; ++c) out(i, c) = eig.vectors(i, c);
  return out;
}

/// Deterministic std::mt19937_64-based helpers for test-local randomness
/// (independent of the library RNG on purpose).
inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed,
                                         double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols,
                                 std::uint64_t seed) {
  return DenseMatrix(rows, cols, random_vector(rows * cols, seed));
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace altgdmin::test

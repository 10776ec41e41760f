#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin {

struct QrFactors {
  OrthonormalBasis q;
  DenseMatrix r;  // upper triangular, strictly positive diagonal
};

/// Thin QR of an n x r matrix (n >= r) by modified Gram-Schmidt with a fixed
/// second reorthogonalization pass. The positive diagonal of R makes the
/// factorization unique, so repeated calls are bit-identical.
/// Throws RankDeficient when sigma_r(M) <= 1e-12 * sigma_1(M).
QrFactors orthonormalize_qr(const DenseMatrix& m);

enum class SubspaceNorm { kSpectral, kFrobenius };

/// ||(I - U1 U1^T) U2|| in the requested norm. Bases must share n and r.
double subspace_distance(const OrthonormalBasis& u1, const OrthonormalBasis& u2,
                         SubspaceNorm norm);

/// Zeroes every entry with |y_j| > sqrt(alpha); idempotent.
std::vector<double> truncate_vector(std::span<const double> y, double alpha);

/// Rescales any row whose norm exceeds mu * sqrt(r/n) down to that threshold;
/// rows at or below the threshold (including zero rows) pass through.
DenseMatrix project_row_incoherent(const DenseMatrix& m, double mu);

/// Eigenvalues of a symmetric matrix, descending (cyclic Jacobi, values only).
std::vector<double> symmetric_eigenvalues(DenseMatrix s);

/// Singular values, descending, via one-sided Jacobi. Accurate to
/// O(eps * sigma_1) absolute, which resolves the 1e-12 rank threshold.
std::vector<double> singular_values(const DenseMatrix& m);

using LinearOperator = std::function<DenseMatrix(const DenseMatrix&)>;

struct PowerMethodResult {
  OrthonormalBasis basis;
  std::vector<double> eigenvalues;  // Rayleigh estimates from the last R factor
  int iterations = 0;
};

/// Block power iteration U <- QR(apply(U)) from a seeded Gaussian start.
/// Stops after `iters` rounds or once successive bases agree to 1e-12 in
/// spectral subspace distance. The operator must be symmetric PSD.
PowerMethodResult power_method_top_r(const LinearOperator& apply,
                                     std::size_t n, std::size_t r, int iters,
                                     std::uint64_t seed);

/// Default power iteration budget: ceil(10 * log2(max(dim, 2))).
int default_power_iters(std::size_t dim);

/// Top-r left singular subspace of M via the power method on M M^T.
OrthonormalBasis top_r_left_singular_vectors(const DenseMatrix& m,
                                             std::size_t r);

/// argmin_b ||y - A b||_2 for a tall full-rank A (m >= r) via QR.
std::vector<double> least_squares(const DenseMatrix& a,
                                  std::span<const double> y);

/// Solves A x = rhs for symmetric positive definite A (in-place Cholesky).
/// Throws RankDeficient if a pivot collapses.
std::vector<double> cholesky_solve_spd(DenseMatrix a, std::vector<double> rhs);

}  // namespace altgdmin

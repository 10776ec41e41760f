#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin {

/// Planted rank-r matrix X* = U* diag(sigma*) V*^T with measured incoherence.
/// Oracle for every error metric; never consumed by the solvers themselves
/// except through explicit oracle hooks.
struct GroundTruth {
  std::size_t n = 0, q = 0, r = 0;
  OrthonormalBasis u_star;           // n x r
  std::vector<double> sigma_star;    // descending, positive
  OrthonormalBasis v_star;           // q x r
  DenseMatrix b_star;                // r x q, = diag(sigma*) V*^T
  double kappa = 1.0;                // sigma*[0] / sigma*[r-1]
  double mu = 1.0;                   // max of the three certificates below
  double mu_b = 0.0;     // smallest mu with max_k ||b*_k||^2 <= mu^2 r smax^2/q
  double mu_row_u = 0.0; // smallest mu with max_j ||u*^j|| <= mu sqrt(r/n)
  double mu_col_v = 0.0; // smallest mu with max_k ||v*_k|| <= mu sqrt(r/q)

  double sigma_max() const { return sigma_star.front(); }
  double fro_norm_sq() const;

  /// x*_k = U* b*_k. The single code path for planted column values; the
  /// measurement generators and the tests both go through it so stored
  /// observations compare bitwise.
  std::vector<double> column(std::size_t k) const;

  DenseMatrix dense() const;  // U* B*
};

struct GroundTruthParams {
  std::size_t n = 0, q = 0, r = 0;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  double sigma_max = 1.0;
  /// Resample (seed bump, up to 20 attempts) until measured mu <= mu_max.
  double mu_max = std::numeric_limits<double>::infinity();
};

/// U*, V* are orthonormalized Gaussian draws; singular values are log-linear
/// from sigma_max down to sigma_max/kappa. Pure function of the params.
GroundTruth generate_ground_truth(const GroundTruthParams& params);

}  // namespace altgdmin

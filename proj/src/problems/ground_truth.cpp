#include "altgdmin/problems/ground_truth.hpp"

#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

double GroundTruth::fro_norm_sq() const {
  double s = 0.0;
  for (double v : sigma_star) s += v * v;
  return s;
}

std::vector<double> GroundTruth::column(std::size_t k) const {
  return matvec(u_star.matrix(), b_star.col(k));
}

DenseMatrix GroundTruth::dense() const {
  return matmul(u_star.matrix(), b_star);
}

GroundTruth generate_ground_truth(const GroundTruthParams& params) {
  const std::size_t n = params.n, q = params.q, r = params.r;
  if (r == 0 || r > std::min(n, q))
    throw BadRank("generate_ground_truth: need 1 <= r <= min(n,q)");
  if (!(params.kappa >= 1.0))
    throw ConfigError("generate_ground_truth: kappa must be >= 1");
  if (!(params.sigma_max > 0.0))
    throw ConfigError("generate_ground_truth: sigma_max must be > 0");

  for (int attempt = 0; attempt < 20; ++attempt) {
    const std::uint64_t s = derive_seed(params.seed, 0x67742000u + attempt);
    GroundTruth gt;
    gt.n = n;
    gt.q = q;
    gt.r = r;
    gt.u_star =
        orthonormalize_qr(gaussian_matrix(derive_seed(s, 0), n, r)).q;
    gt.v_star =
        orthonormalize_qr(gaussian_matrix(derive_seed(s, 1), q, r)).q;

    gt.sigma_star.resize(r);
    if (r == 1) {
      gt.sigma_star[0] = params.sigma_max;
    } else {
      for (std::size_t i = 0; i < r; ++i)
        gt.sigma_star[i] =
            params.sigma_max *
            std::pow(params.kappa, -static_cast<double>(i) /
                                       static_cast<double>(r - 1));
    }
    gt.kappa = gt.sigma_star.front() / gt.sigma_star.back();

    gt.b_star = DenseMatrix(r, q);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < q; ++k)
        gt.b_star(i, k) = gt.sigma_star[i] * gt.v_star(k, i);

    const double smax = gt.sigma_max();
    double max_b_sq = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      double col_sq = 0.0;
      for (std::size_t i = 0; i < r; ++i)
        col_sq += gt.b_star(i, k) * gt.b_star(i, k);
      max_b_sq = std::max(max_b_sq, col_sq);
    }
    gt.mu_b = std::sqrt(max_b_sq * static_cast<double>(q) /
                        (static_cast<double>(r) * smax * smax));

    double max_u_row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      max_u_row = std::max(
          max_u_row, std::sqrt(kernels::nrm2sq(gt.u_star.matrix().row(j), r)));
    gt.mu_row_u = max_u_row * std::sqrt(static_cast<double>(n) /
                                        static_cast<double>(r));

    double max_v_row = 0.0;
    for (std::size_t k = 0; k < q; ++k)
      max_v_row = std::max(
          max_v_row, std::sqrt(kernels::nrm2sq(gt.v_star.matrix().row(k), r)));
    gt.mu_col_v = max_v_row * std::sqrt(static_cast<double>(q) /
                                        static_cast<double>(r));

    gt.mu = std::max({gt.mu_b, gt.mu_row_u, gt.mu_col_v});
    if (gt.mu <= params.mu_max) return gt;
  }
  throw GenerationFailed(
      "generate_ground_truth: mu_max not satisfied after 20 attempts");
}

}  // namespace altgdmin

#pragma once

#include <vector>

#include "altgdmin/core/matrix.hpp"
#include "altgdmin/problems/measure.hpp"

namespace altgdmin {

/// Decoupled least-squares update: column k of the result is
/// argmin_b ||y_k - A_k U b||. Throws RankDeficient if some A_k U loses rank.
DenseMatrix lrcs_update_B(const OrthonormalBasis& u, const LrcsData& data);

/// Gradient of the (scaled) LRCS objective at (U, B):
/// sum_k A_k^T (A_k U b_k - y_k) b_k^T. The conventional factor 2 of the
/// squared loss is folded into the step-size rule.
DenseMatrix lrcs_grad_U(const DenseMatrix& u, const DenseMatrix& b,
                        const LrcsData& data);

double lrcs_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const LrcsData& data);

struct LrprBcUpdate {
  DenseMatrix b;  // r x q
  DenseMatrix c;  // m x q, entries in {-1, +1}
};

/// Per-column sign/least-squares alternation (inner_iters rounds), warm
/// started from `warm_b` when given, else from a per-column spectral start.
LrprBcUpdate lrpr_update_Bc(const OrthonormalBasis& u, const LrprData& data,
                            int inner_iters,
                            const DenseMatrix* warm_b = nullptr,
                            std::uint64_t seed = 0);

double lrpr_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const DenseMatrix& c, const LrprData& data);

struct LrmcBUpdate {
  DenseMatrix b;                         // r x q, flagged columns zeroed
  std::vector<std::uint32_t> flagged;    // underdetermined columns
};

LrmcBUpdate lrmc_update_B(const OrthonormalBasis& u, const LrmcData& data);

/// Gradient over observed entries only: ((U B - Y)_Omega) B^T.
DenseMatrix lrmc_grad_U(const DenseMatrix& u, const DenseMatrix& b,
                        const LrmcData& data);

double lrmc_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const LrmcData& data);

}  // namespace altgdmin

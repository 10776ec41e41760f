#include "altgdmin/solvers/ops.hpp"

#include <cmath>

#include "altgdmin/core/exact_sum.hpp"
#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

DenseMatrix lrcs_update_B(const OrthonormalBasis& u, const LrcsData& data) {
  if (data.m < u.r()) throw RankDeficient("lrcs_update_B: m < r");
  DenseMatrix b(u.r(), data.q);
  for (std::size_t k = 0; k < data.q; ++k) {
    const DenseMatrix au = matmul(data.operator_matrix(k), u.matrix());
    const std::vector<double> bk = least_squares(au, data.y.col(k));
    b.set_col(k, bk);
  }
  return b;
}

DenseMatrix lrcs_grad_U(const DenseMatrix& u, const DenseMatrix& b,
                        const LrcsData& data) {
  ExactMatrixAccumulator acc(data.n, u.cols());
  for (std::size_t k = 0; k < data.q; ++k) {
    const DenseMatrix a = data.operator_matrix(k);
    const DenseMatrix au = matmul(a, u);
    const std::vector<double> bk = b.col(k);
    std::vector<double> res = matvec(au, bk);
    const std::vector<double> yk = data.y.col(k);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= yk[i];
    const std::vector<double> w = matvec_transposed(a, res);
    acc.add_outer(w, bk);
  }
  DenseMatrix g(data.n, u.cols());
  acc.round_into(g);
  return g;
}

double lrcs_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const LrcsData& data) {
  ExactAccumulator acc;
  for (std::size_t k = 0; k < data.q; ++k) {
    const std::vector<double> xk = matvec(u, b.col(k));
    std::vector<double> res = apply_forward(data, k, xk);
    const std::vector<double> yk = data.y.col(k);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= yk[i];
    acc.add(kernels::nrm2sq(res.data(), res.size()));
  }
  return acc.round();
}

LrprBcUpdate lrpr_update_Bc(const OrthonormalBasis& u, const LrprData& data,
                            int inner_iters, const DenseMatrix* warm_b,
                            std::uint64_t seed) {
  if (data.m < u.r()) throw RankDeficient("lrpr_update_Bc: m < r");
  if (inner_iters < 1) throw ConfigError("lrpr_update_Bc: inner_iters >= 1");
  const std::size_t r = u.r();
  LrprBcUpdate out;
  out.b = DenseMatrix(r, data.q);
  out.c = DenseMatrix(data.m, data.q);
  for (std::size_t k = 0; k < data.q; ++k) {
    const DenseMatrix au = matmul(data.operator_matrix(k), u.matrix());
    const std::vector<double> zk = data.z.col(k);

    std::vector<double> bk;
    if (warm_b) {
      bk = warm_b->col(k);
    } else {
      // Spectral start: top eigenvector of sum_i z_i^2 (au_i)(au_i)^T.
      DenseMatrix s(r, r);
      for (std::size_t i = 0; i < data.m; ++i) {
        const double zi2 = zk[i] * zk[i];
        for (std::size_t c1 = 0; c1 < r; ++c1)
          for (std::size_t c2 = 0; c2 < r; ++c2)
            s(c1, c2) += zi2 * au(i, c1) * au(i, c2);
      }
      Rng rng(derive_seed(seed, 0x7072u, k));
      bk.assign(r, 0.0);
      for (double& x : bk) x = rng.next_gaussian();
      for (int it = 0; it < 30; ++it) {
        std::vector<double> sv = matvec(s, bk);
        const double norm = vec_norm(sv);
        if (!(norm > 0.0)) break;
        for (std::size_t i = 0; i < r; ++i) bk[i] = sv[i] / norm;
      }
      const double scale = std::sqrt(kernels::nrm2sq(zk.data(), data.m) /
                                     static_cast<double>(data.m));
      for (double& x : bk) x *= scale;
    }

    std::vector<double> ck(data.m, 1.0);
    std::vector<double> yhat(data.m);
    for (int round = 0; round < inner_iters; ++round) {
      const std::vector<double> aub = matvec(au, bk);
      for (std::size_t i = 0; i < data.m; ++i)
        ck[i] = aub[i] < 0.0 ? -1.0 : 1.0;  // sign(0) := +1
      for (std::size_t i = 0; i < data.m; ++i) yhat[i] = ck[i] * zk[i];
      bk = least_squares(au, yhat);
    }
    out.b.set_col(k, bk);
    out.c.set_col(k, ck);
  }
  return out;
}

double lrpr_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const DenseMatrix& c, const LrprData& data) {
  ExactAccumulator acc;
  for (std::size_t k = 0; k < data.q; ++k) {
    const std::vector<double> xk = matvec(u, b.col(k));
    const std::vector<double> ax = apply_forward(data, k, xk);
    const std::vector<double> zk = data.z.col(k);
    double term = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      const double d = zk[i] - c(i, k) * ax[i];
      term += d * d;
    }
    acc.add(term);
  }
  return acc.round();
}

LrmcBUpdate lrmc_update_B(const OrthonormalBasis& u, const LrmcData& data) {
  const std::size_t r = u.r();
  LrmcBUpdate out;
  out.b = DenseMatrix(r, data.q);
  for (std::size_t k = 0; k < data.q; ++k) {
    const auto rows = data.rows_of(k);
    const auto vals = data.values_of(k);
    if (rows.size() < r) {
      out.flagged.push_back(static_cast<std::uint32_t>(k));
      continue;
    }
    DenseMatrix u_rows(rows.size(), r);
    for (std::size_t t = 0; t < rows.size(); ++t)
      std::copy(u.matrix().row(rows[t]), u.matrix().row(rows[t]) + r,
                u_rows.row(t));
    try {
      const std::vector<double> bk = least_squares(u_rows, vals);
      out.b.set_col(k, bk);
    } catch (const RankDeficient&) {
      out.flagged.push_back(static_cast<std::uint32_t>(k));
    }
  }
  return out;
}

DenseMatrix lrmc_grad_U(const DenseMatrix& u, const DenseMatrix& b,
                        const LrmcData& data) {
  ExactMatrixAccumulator acc(data.n, u.cols());
  std::vector<double> w;
  for (std::size_t k = 0; k < data.q; ++k) {
    const auto rows = data.rows_of(k);
    const auto vals = data.values_of(k);
    if (rows.empty()) continue;
    const std::vector<double> bk = b.col(k);
    w.resize(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
      w[t] = kernels::dot(u.row(rows[t]), bk.data(), u.cols()) - vals[t];
    acc.add_outer_rows(rows, w, bk);
  }
  DenseMatrix g(data.n, u.cols());
  acc.round_into(g);
  return g;
}

double lrmc_objective(const DenseMatrix& u, const DenseMatrix& b,
                      const LrmcData& data) {
  ExactAccumulator acc;
  for (std::size_t k = 0; k < data.q; ++k) {
    const auto rows = data.rows_of(k);
    const auto vals = data.values_of(k);
    const std::vector<double> bk = b.col(k);
    double term = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const double d =
          kernels::dot(u.row(rows[t]), bk.data(), u.cols()) - vals[t];
      term += d * d;
    }
    acc.add(term);
  }
  return acc.round();
}

}  // namespace altgdmin

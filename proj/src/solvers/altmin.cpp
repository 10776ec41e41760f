#include "altgdmin/solvers/altmin.hpp"

#include <chrono>
#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"
#include "altgdmin/solvers/engine.hpp"
#include "altgdmin/solvers/flops.hpp"
#include "altgdmin/solvers/models.hpp"
#include "altgdmin/solvers/ops.hpp"
#include "altgdmin/util/parallel.hpp"

namespace altgdmin {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void record_iteration(RunTrace& trace, int iter, const OrthonormalBasis& u,
                      const GroundTruth* oracle, double objective,
                      std::uint64_t flops_cum, double secs, int flagged) {
  TraceRecord rec;
  rec.iter = iter;
  rec.objective = objective;
  rec.flops = flops_cum;
  rec.seconds = secs;
  rec.underdetermined_cols = flagged;
  if (oracle) {
    rec.se2 = subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
    rec.sef = subspace_distance(u, oracle->u_star, SubspaceNorm::kFrobenius);
  }
  trace.records.push_back(rec);
}

}  // namespace

SolveResult altmin_lrcs(const LrcsData& data, std::size_t r,
                        const SolverConfig& cfg, const GroundTruth* oracle) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = data.n, q = data.q, m = data.m;
  if (m < r) throw RankDeficient("altmin_lrcs: m < r");

  flops::Counter fc;
  RunTrace trace;

  // Same spectral init as the GD solver.
  const LrcsInitResult init =
      lrcs_init(data, r, resolve_c_tilde(cfg, oracle));
  trace.alpha = init.alpha;
  trace.power_iters = init.power_iters;
  DenseMatrix u = init.u0.matrix();
  OrthonormalBasis u_metric = init.u0;
  if (oracle)
    trace.init_se2 =
        subspace_distance(u_metric, oracle->u_star, SubspaceNorm::kSpectral);
  record_iteration(trace, 0, u_metric, oracle, kTraceNaN, fc.total,
                   seconds_since(t0), 0);

  std::vector<DenseMatrix> ops(q);
  std::vector<DenseMatrix> ops_t(q);
  const int threads = effective_threads(cfg.threads);
  parallel_for(q, threads, [&](std::size_t k) {
    ops[k] = data.operator_matrix(k);
    ops_t[k] = ops[k].transposed();
  });

  DenseMatrix bt(q, r);  // row k = b_k
  for (int iter = 1; iter <= cfg.t_max; ++iter) {
    // B step: decoupled least squares.
    parallel_for(q, threads, [&](std::size_t k) {
      DenseMatrix au(m, r);
      kernels::gemm_acc(au.data(), ops[k].data(), u.data(), m, n, r);
      const std::vector<double> bk =
          least_squares(au, std::span<const double>(data.y.col(k)));
      std::copy(bk.begin(), bk.end(), bt.row(k));
    });
    fc.add(q * (flops::gemm(m, n, r) + flops::least_squares(m, r)));

    // U step: closed-form minimizer of the coupled quadratic via the
    // nr x nr normal equations. This is the expensive half: every iteration
    // rebuilds sum_k (b_k b_k^T (x) A_k^T A_k), Gram factors included.
    // Assembled serially so runs are thread-count invariant.
    const std::size_t d = n * r;
    DenseMatrix normal(d, d);
    std::vector<double> rhs(d, 0.0);
    DenseMatrix gram(n, n);
    for (std::size_t k = 0; k < q; ++k) {
      const double* bk = bt.row(k);
      gram.fill(0.0);
      kernels::gemm_acc(gram.data(), ops_t[k].data(), ops[k].data(), n, m, n);
      for (std::size_t c1 = 0; c1 < r; ++c1) {
        for (std::size_t c2 = 0; c2 < r; ++c2) {
          const double w = bk[c1] * bk[c2];
          if (w == 0.0) continue;
          for (std::size_t i = 0; i < n; ++i) {
            double* dst = normal.row(c1 * n + i) + c2 * n;
            kernels::axpy(n, w, gram.row(i), dst);
          }
        }
      }
      // rhs += vec(A_k^T y_k b_k^T), column-major over (i, c).
      const std::vector<double> aty =
          matvec_transposed(ops[k], std::span<const double>(data.y.col(k)));
      for (std::size_t c = 0; c < r; ++c)
        kernels::axpy(n, bk[c], aty.data(), rhs.data() + c * n);
    }
    // Per column: the Gram product plus 2 r^2 n^2 for the Kronecker
    // accumulate plus the A^T y and rhs terms.
    fc.add(q * (flops::gemm(n, m, n) + 2ull * r * r * n * n +
                flops::gemv(m, n) + 2ull * r * n));
    const std::vector<double> u_vec = cholesky_solve_spd(normal, rhs);
    fc.add(flops::cholesky(d));
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t i = 0; i < n; ++i) u(i, c) = u_vec[c * n + i];

    const double objective = lrcs_objective(u, [&] {
      DenseMatrix b(r, q);
      for (std::size_t k = 0; k < q; ++k)
        for (std::size_t c = 0; c < r; ++c) b(c, k) = bt(k, c);
      return b;
    }(), data);

    OrthonormalBasis next_metric = orthonormalize_qr(u).q;
    const double step =
        subspace_distance(next_metric, u_metric, SubspaceNorm::kSpectral);
    u_metric = std::move(next_metric);
    record_iteration(trace, iter, u_metric, oracle, objective, fc.total,
                     seconds_since(t0), 0);
    if (step <= cfg.tol) {
      trace.stopped_by_tol = true;
      break;
    }
  }

  // Final estimate on the orthonormalized basis.
  const DenseMatrix b_final = lrcs_update_B(u_metric, data);
  fc.add(q * (flops::gemm(m, n, r) + flops::least_squares(m, r)));

  SolveResult result;
  result.estimate.u = u_metric;
  result.estimate.b = b_final;
  result.trace = std::move(trace);

  FinalStats& fs = result.trace.final_stats;
  fs.objective = lrcs_objective(u_metric.matrix(), b_final, data);
  double worst = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const std::vector<double> xk = matvec(u_metric.matrix(), b_final.col(k));
    std::vector<double> res = matvec(ops[k], xk);
    const std::vector<double> yk = data.y.col(k);
    for (std::size_t i = 0; i < m; ++i) res[i] -= yk[i];
    const double ref = kernels::nrm2sq(yk.data(), m);
    if (ref > 0.0)
      worst = std::max(worst,
                       std::sqrt(kernels::nrm2sq(res.data(), m) / ref));
  }
  fs.residual = worst;
  if (oracle) {
    fs.se2 = subspace_distance(u_metric, oracle->u_star,
                               SubspaceNorm::kSpectral);
    fs.sef = subspace_distance(u_metric, oracle->u_star,
                               SubspaceNorm::kFrobenius);
    double err = 0.0;
    ExactAccumulator dsum, rsum;
    for (std::size_t k = 0; k < q; ++k) {
      std::vector<double> xhat = matvec(u_metric.matrix(), b_final.col(k));
      const std::vector<double> xs = oracle->column(k);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dd = xhat[i] - xs[i];
        diff += dd * dd;
      }
      const double ref = kernels::nrm2sq(xs.data(), n);
      dsum.add(diff);
      rsum.add(ref);
      if (ref > 0.0) err = std::max(err, std::sqrt(diff / ref));
    }
    fs.max_col_err = err;
    fs.rel_fro_err = std::sqrt(dsum.round() / rsum.round());
  }
  return result;
}

SolveResult altmin_lrmc(const LrmcData& data, std::size_t r,
                        const SolverConfig& cfg, const GroundTruth* oracle) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = data.n, q = data.q;

  flops::Counter fc;
  RunTrace trace;

  const double mu = resolve_mu(cfg, oracle);
  OrthonormalBasis u = lrmc_init(data, r, mu);
  if (oracle)
    trace.init_se2 =
        subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
  record_iteration(trace, 0, u, oracle, kTraceNaN, fc.total,
                   seconds_since(t0), 0);

  // Row-wise view of Omega for the U step.
  std::vector<std::vector<std::uint32_t>> row_cols(n);
  std::vector<std::vector<double>> row_vals(n);
  for (std::size_t k = 0; k < q; ++k) {
    const auto rows = data.rows_of(k);
    const auto vals = data.values_of(k);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      row_cols[rows[t]].push_back(static_cast<std::uint32_t>(k));
      row_vals[rows[t]].push_back(vals[t]);
    }
  }

  const int threads = effective_threads(cfg.threads);
  DenseMatrix bt(q, r);
  int flagged_total = 0;
  for (int iter = 1; iter <= cfg.t_max; ++iter) {
    int flagged = 0;
    // B step: per-column LS on observed rows; zero-and-flag when
    // underdetermined.
    std::vector<char> col_flag(q, 0);
    parallel_for(q, threads, [&](std::size_t k) {
      const auto rows = data.rows_of(k);
      const auto vals = data.values_of(k);
      double* bk = bt.row(k);
      std::fill(bk, bk + r, 0.0);
      if (rows.size() < r) {
        col_flag[k] = 1;
        return;
      }
      DenseMatrix u_rows(rows.size(), r);
      for (std::size_t t = 0; t < rows.size(); ++t)
        std::copy(u.matrix().row(rows[t]), u.matrix().row(rows[t]) + r,
                  u_rows.row(t));
      try {
        const std::vector<double> sol = least_squares(u_rows, vals);
        std::copy(sol.begin(), sol.end(), bk);
      } catch (const RankDeficient&) {
        col_flag[k] = 1;
      }
    });
    for (std::size_t k = 0; k < q; ++k)
      if (col_flag[k]) {
        ++flagged;
        trace.flagged_columns.push_back(static_cast<std::uint32_t>(k));
      }
    fc.add(data.omega_size() * flops::dot(r) +
           q * flops::least_squares(
                   std::max<std::size_t>(data.omega_size() / q, r), r));

    // U step: per-row LS on observed columns.
    DenseMatrix u_new(n, r);
    std::vector<char> row_flag(n, 0);
    parallel_for(n, threads, [&](std::size_t j) {
      const auto& cols = row_cols[j];
      const auto& vals = row_vals[j];
      double* uj = u_new.row(j);
      std::fill(uj, uj + r, 0.0);
      if (cols.size() < r) {
        row_flag[j] = 1;
        return;
      }
      DenseMatrix design(cols.size(), r);
      for (std::size_t t = 0; t < cols.size(); ++t)
        std::copy(bt.row(cols[t]), bt.row(cols[t]) + r, design.row(t));
      try {
        const std::vector<double> sol = least_squares(design, vals);
        std::copy(sol.begin(), sol.end(), uj);
      } catch (const RankDeficient&) {
        row_flag[j] = 1;
      }
    });
    for (std::size_t j = 0; j < n; ++j)
      if (row_flag[j]) ++flagged;
    fc.add(data.omega_size() * flops::dot(r) +
           n * flops::least_squares(
                   std::max<std::size_t>(data.omega_size() / n, r), r));

    // QR for numerical parity; B <- R B keeps X = U B unchanged.
    QrFactors f = orthonormalize_qr(u_new);
    fc.add(flops::qr(n, r));
    DenseMatrix bt_new(q, r);
    for (std::size_t k = 0; k < q; ++k)
      for (std::size_t c1 = 0; c1 < r; ++c1) {
        double s = 0.0;
        for (std::size_t c2 = c1; c2 < r; ++c2)
          s += f.r(c1, c2) * bt(k, c2);
        bt_new(k, c1) = s;
      }
    bt = std::move(bt_new);
    const double step = subspace_distance(f.q, u, SubspaceNorm::kSpectral);
    u = std::move(f.q);
    flagged_total += flagged;

    DenseMatrix b(r, q);
    for (std::size_t k = 0; k < q; ++k)
      for (std::size_t c = 0; c < r; ++c) b(c, k) = bt(k, c);
    const double objective = lrmc_objective(u.matrix(), b, data);
    record_iteration(trace, iter, u, oracle, objective, fc.total,
                     seconds_since(t0), flagged);
    if (step <= cfg.tol) {
      trace.stopped_by_tol = true;
      break;
    }
  }

  const LrmcBUpdate final_b = lrmc_update_B(u, data);
  SolveResult result;
  result.estimate.u = u;
  result.estimate.b = final_b.b;
  result.trace = std::move(trace);

  FinalStats& fs = result.trace.final_stats;
  fs.objective = lrmc_objective(u.matrix(), final_b.b, data);
  double ref_total = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const auto vals = data.values_of(k);
    ref_total += kernels::nrm2sq(vals.data(), vals.size());
  }
  fs.residual = ref_total > 0.0 ? std::sqrt(fs.objective / ref_total) : 0.0;
  if (oracle) {
    fs.se2 = subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
    fs.sef = subspace_distance(u, oracle->u_star, SubspaceNorm::kFrobenius);
    ExactAccumulator dsum, rsum;
    double err = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      std::vector<double> xhat = matvec(u.matrix(), final_b.b.col(k));
      const std::vector<double> xs = oracle->column(k);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dd = xhat[i] - xs[i];
        diff += dd * dd;
      }
      const double ref = kernels::nrm2sq(xs.data(), n);
      dsum.add(diff);
      rsum.add(ref);
      if (ref > 0.0) err = std::max(err, std::sqrt(diff / ref));
    }
    fs.max_col_err = err;
    fs.rel_fro_err = std::sqrt(dsum.round() / rsum.round());
  }
  return result;
}

double per_round_comm_elements(ProblemKind kind, bool altmin, std::size_t n,
                               std::size_t r, std::size_t omega,
                               std::size_t gamma) {
  if (altmin && kind == ProblemKind::kLrmc)
    return static_cast<double>(omega) / static_cast<double>(gamma);
  return static_cast<double>(n) * static_cast<double>(r);
}

}  // namespace altgdmin

#include <doctest.h>

#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/kernels/kernels.hpp"
#include "altgdmin/problems/measure.hpp"
#include "altgdmin/solvers/engine.hpp"
#include "altgdmin/solvers/ops.hpp"
#include "support/test_support.hpp"

using namespace altgdmin;

namespace {

GroundTruth make_gt(std::size_t n, std::size_t q, std::size_t r, double kappa,
                    std::uint64_t seed) {
  GroundTruthParams p;
  p.n = n;
  p.q = q;
  p.r = r;
  p.kappa = kappa;
  p.seed = seed;
  return generate_ground_truth(p);
}

}  // namespace

TEST_SUITE("solver_lrmc") {

TEST_CASE("full observation recovers the planted span at init") {
  const GroundTruth gt = make_gt(40, 50, 2, 1.3, 1);
  const LrmcData d = lrmc_sample(gt, 1.0, 2);
  // With the measured mu the planted basis is row-incoherent by definition,
  // so the projection is a no-op and the init nails the span.
  const OrthonormalBasis u0 = lrmc_init(d, 2, gt.mu);
  CHECK(subspace_distance(u0, gt.u_star, SubspaceNorm::kSpectral) <= 1e-8);
}

TEST_CASE("all-zero observations cannot be initialized") {
  GroundTruth gt = make_gt(12, 12, 2, 1.0, 3);
  gt.b_star.fill(0.0);
  const LrmcData d = lrmc_sample(gt, 0.5, 4);
  CHECK_THROWS_AS(lrmc_init(d, 2, gt.mu), RankDeficient);
}

TEST_CASE("partial observation init lands within 0.5 in most seeds") {
  int good = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const GroundTruth gt = make_gt(120, 120, 2, 1.3, 100 + trial);
    const LrmcData d = lrmc_sample(gt, 0.35, 900 + trial);
    const OrthonormalBasis u0 = lrmc_init(d, 2, gt.mu);
    if (subspace_distance(u0, gt.u_star, SubspaceNorm::kSpectral) <= 0.5)
      ++good;
  }
  CHECK(good >= 90);
}

TEST_CASE("B update at full observation returns the planted coefficients") {
  const GroundTruth gt = make_gt(30, 25, 2, 1.5, 5);
  const LrmcData d = lrmc_sample(gt, 1.0, 6);
  const LrmcBUpdate upd = lrmc_update_B(gt.u_star, d);
  CHECK(upd.flagged.empty());
  for (std::size_t k = 0; k < d.q; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(std::abs(upd.b(i, k) - gt.b_star(i, k)) <= 1e-10);
}

TEST_CASE("empty columns are flagged and zeroed, the run continues") {
  const GroundTruth gt = make_gt(10, 5, 1, 1.0, 7);
  LrmcData d = lrmc_sample(gt, 1.0, 8);
  // Erase column 2's observations by hand.
  LrmcData sparse;
  sparse.n = d.n;
  sparse.q = d.q;
  sparse.p = 0.5;
  sparse.col_ptr.assign(d.q + 1, 0);
  for (std::size_t k = 0; k < d.q; ++k) {
    if (k != 2) {
      const auto rows = d.rows_of(k);
      const auto vals = d.values_of(k);
      sparse.row_idx.insert(sparse.row_idx.end(), rows.begin(), rows.end());
      sparse.values.insert(sparse.values.end(), vals.begin(), vals.end());
    }
    sparse.col_ptr[k + 1] = static_cast<std::uint32_t>(sparse.row_idx.size());
  }
  const LrmcBUpdate upd = lrmc_update_B(gt.u_star, sparse);
  CHECK(upd.flagged == std::vector<std::uint32_t>{2});
  for (std::size_t i = 0; i < 1; ++i) CHECK(upd.b(i, 2) == 0.0);
}

TEST_CASE("observed-row residuals are orthogonal to the restricted basis") {
  const GroundTruth gt = make_gt(35, 20, 2, 1.2, 9);
  const LrmcData d = lrmc_sample(gt, 0.6, 10, 0.05);  // noise -> residuals
  const OrthonormalBasis u = orthonormalize_qr(gaussian_matrix(4, 35, 2)).q;
  const LrmcBUpdate upd = lrmc_update_B(u, d);
  for (std::size_t k = 0; k < d.q; ++k) {
    const auto rows = d.rows_of(k);
    const auto vals = d.values_of(k);
    if (rows.size() < 2) continue;
    std::vector<double> proj(2, 0.0);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const double pred =
          kernels::dot(u.matrix().row(rows[t]), upd.b.col(k).data(), 2);
      kernels::axpy(2, pred - vals[t], u.matrix().row(rows[t]), proj.data());
    }
    for (double v : proj) CHECK(std::abs(v) <= 1e-9);
  }
}

TEST_CASE("gradient: empty support, planted optimum, finite differences") {
  const GroundTruth gt = make_gt(15, 10, 2, 1.0, 11);
  LrmcData empty;
  empty.n = 15;
  empty.q = 10;
  empty.p = 0.1;
  empty.col_ptr.assign(11, 0);
  const DenseMatrix b0 = test::random_matrix(2, 10, 12);
  CHECK(lrmc_grad_U(gt.u_star.matrix(), b0, empty).max_abs() == 0.0);

  const LrmcData full = lrmc_sample(gt, 1.0, 13);
  CHECK(lrmc_grad_U(gt.u_star.matrix(), gt.b_star, full).max_abs() <= 1e-9);

  const LrmcData part = lrmc_sample(gt, 0.7, 14);
  const DenseMatrix u = test::random_matrix(15, 2, 15);
  const DenseMatrix b = test::random_matrix(2, 10, 16);
  const DenseMatrix g = lrmc_grad_U(u, b, part);
  const double h = 1e-6;
  for (int dir = 0; dir < 10; ++dir) {
    const DenseMatrix delta = test::random_matrix(15, 2, 700 + dir);
    DenseMatrix up = u, dn = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
      up.data()[i] += h * delta.data()[i];
      dn.data()[i] -= h * delta.data()[i];
    }
    const double fd =
        (lrmc_objective(up, b, part) - lrmc_objective(dn, b, part)) /
        (2.0 * h);
    double inner = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      inner += g.data()[i] * delta.data()[i];
    CHECK(std::abs(fd - 2.0 * inner) <= 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("noise-free solve reaches 1e-8 relative error within 600") {
  const GroundTruth gt = make_gt(150, 150, 2, 1.3, 21);
  const LrmcData d = lrmc_sample(gt, 0.4, 22);
  SolverConfig cfg;
  cfg.c_eta = 0.5;
  cfg.t_max = 600;
  cfg.threads = 2;
  const SolveResult res = altgdmin_lrmc(d, 2, cfg, &gt);
  CHECK(res.trace.final_stats.rel_fro_err <= 1e-8);
  CHECK(res.trace.iterations() <= 600);
  // Ground-truth-free cross-check: observed-entry residual is tiny too.
  CHECK(res.trace.final_stats.residual <= 1e-8);
}

TEST_CASE("full observation converges almost immediately") {
  const GroundTruth gt = make_gt(40, 40, 2, 1.2, 31);
  const LrmcData d = lrmc_sample(gt, 1.0, 32);
  SolverConfig cfg;
  cfg.c_eta = 0.5;
  cfg.t_max = 50;
  const SolveResult res = altgdmin_lrmc(d, 2, cfg, &gt);
  // Exact data and exact per-column LS: the first refresh is already exact;
  // the trace must show 1e-10 accuracy within a handful of iterations.
  bool reached = false;
  for (const TraceRecord& rec : res.trace.records)
    if (rec.iter <= 5 && rec.max_col_err <= 1e-10) reached = true;
  CHECK(reached);
}

TEST_CASE("step-size bound is enforced") {
  const GroundTruth gt = make_gt(20, 20, 2, 1.0, 41);
  const LrmcData d = lrmc_sample(gt, 0.5, 42);
  SolverConfig cfg;
  cfg.c_eta = 0.81;
  CHECK_THROWS_AS(altgdmin_lrmc(d, 2, cfg, &gt), ConfigError);
  CHECK_THROWS_WITH_AS(altgdmin_lrmc(d, 2, cfg, &gt),
                       "c_eta must lie in (0, 0.8]", ConfigError);
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/kernels/kernels.hpp"
#include "support/test_support.hpp"

using namespace altgdmin;

namespace {

OrthonormalBasis span_of(std::vector<std::vector<double>> cols) {
  const std::size_t n = cols[0].size(), r = cols.size();
  DenseMatrix m(n, r);
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t i = 0; i < n; ++i) m(i, c) = cols[c][i];
  return OrthonormalBasis(m);
}

double reconstruction_error(const DenseMatrix& m, const QrFactors& f) {
  DenseMatrix qr(m.rows(), m.cols());
  kernels::gemm_acc(qr.data(), f.q.matrix().data(), f.r.data(), m.rows(),
                    m.cols(), m.cols());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = qr.data()[i] - m.data()[i];
    num += d * d;
    den += m.data()[i] * m.data()[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("qr of the identity is the identity") {
  DenseMatrix eye(3, 3);
  for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const QrFactors f = orthonormalize_qr(eye);
  CHECK(test::max_abs_diff(f.q.matrix(), eye) == 0.0);
  CHECK(test::max_abs_diff(f.r, eye) == 0.0);
}

TEST_CASE("qr normalizes already-orthogonal columns with positive diagonal") {
  DenseMatrix m(3, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 3.0;
  const QrFactors f = orthonormalize_qr(m);
  CHECK(f.q(0, 0) == 1.0);
  CHECK(f.q(1, 1) == 1.0);
  CHECK(f.q(2, 0) == 0.0);
  CHECK(f.r(0, 0) == 2.0);
  CHECK(f.r(1, 1) == 3.0);
  CHECK(f.r(0, 1) == 0.0);
}

TEST_CASE("qr reconstructs and orthogonalizes a rank-2 matrix") {
  const DenseMatrix m(3, 2, {1, 1, 1, 0, 0, 1});
  const QrFactors f = orthonormalize_qr(m);
  CHECK(reconstruction_error(m, f) <= 1e-12);
  // Gram check within 1e-12 (well inside the basis class tolerance).
  const DenseMatrix qt = f.q.matrix().transposed();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double g = kernels::dot(qt.row(i), qt.row(j), 3);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
  CHECK(f.r(0, 0) > 0.0);
  CHECK(f.r(1, 1) > 0.0);
}

TEST_CASE("qr is deterministic and stable under tiny perturbations") {
  const DenseMatrix m = test::random_matrix(20, 4, 9);
  const QrFactors f1 = orthonormalize_qr(m);
  const QrFactors f2 = orthonormalize_qr(m);
  CHECK(test::max_abs_diff(f1.q.matrix(), f2.q.matrix()) == 0.0);
  CHECK(test::max_abs_diff(f1.r, f2.r) == 0.0);

  DenseMatrix perturbed = m;
  for (std::size_t i = 0; i < perturbed.size(); ++i)
    perturbed.data()[i] += 1e-13 * (static_cast<int>(i % 3) - 1);
  const QrFactors f3 = orthonormalize_qr(perturbed);
  CHECK(test::max_abs_diff(f1.q.matrix(), f3.q.matrix()) <= 1e-9);
}

TEST_CASE("qr rejects rank-deficient input") {
  DenseMatrix m(4, 2);
  for (int i = 0; i < 4; ++i) {
    m(i, 0) = 1.0 + i;
    m(i, 1) = 2.0 * (1.0 + i);  // duplicate direction
  }
  CHECK_THROWS_AS(orthonormalize_qr(m), RankDeficient);
  CHECK_THROWS_AS(orthonormalize_qr(DenseMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("subspace distance: identical, orthogonal, and 45-degree cases") {
  const auto e1_r3 = span_of({{1, 0, 0}});
  const auto e2_r3 = span_of({{0, 1, 0}});
  CHECK(subspace_distance(e1_r3, e1_r3, SubspaceNorm::kSpectral) <= 1e-12);
  CHECK(std::abs(subspace_distance(e1_r3, e2_r3, SubspaceNorm::kSpectral) -
                 1.0) <= 1e-12);

  const double s = 1.0 / std::sqrt(2.0);
  const auto e1_r2 = span_of({{1, 0}});
  const auto diag = span_of({{s, s}});
  CHECK(std::abs(subspace_distance(e1_r2, diag, SubspaceNorm::kSpectral) -
                 0.7071067811865476) <= 1e-12);
}

TEST_CASE("subspace distance symmetry and frobenius bound") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u1 =
        orthonormalize_qr(gaussian_matrix(seed * 2 + 1, 12, 3)).q;
    const auto u2 =
        orthonormalize_qr(gaussian_matrix(seed * 2 + 2, 12, 3)).q;
    const double d12 = subspace_distance(u1, u2, SubspaceNorm::kSpectral);
    const double d21 = subspace_distance(u2, u1, SubspaceNorm::kSpectral);
    CHECK(std::abs(d12 - d21) <= 1e-10);
    const double df = subspace_distance(u1, u2, SubspaceNorm::kFrobenius);
    CHECK(df <= std::sqrt(3.0) * d12 + 1e-12);
  }
  const auto a = span_of({{1, 0, 0}});
  const auto b = span_of({{1, 0, 0}, {0, 1, 0}});
  CHECK_THROWS_AS(subspace_distance(a, b, SubspaceNorm::kSpectral),
                  DimensionMismatch);
}

TEST_CASE("truncation examples and properties") {
  CHECK(truncate_vector(std::vector<double>{1, 2, 3}, 4.0) ==
        std::vector<double>{1, 2, 0});
  CHECK(truncate_vector(std::vector<double>{0, 0, 0}, 0.5) ==
        std::vector<double>{0, 0, 0});
  CHECK(truncate_vector(std::vector<double>{-5.0, 0.5, 2.0}, 4.41) ==
        std::vector<double>{0.0, 0.5, 2.0});
  CHECK_THROWS_AS(truncate_vector(std::vector<double>{1.0}, 0.0),
                  NonPositiveThreshold);
  CHECK_THROWS_AS(truncate_vector(std::vector<double>{1.0}, -1.0),
                  NonPositiveThreshold);

  // Idempotence and the no-op case max|y|^2 <= alpha.
  const auto y = test::random_vector(64, 13, -2.0, 2.0);
  const auto once = truncate_vector(y, 1.9);
  CHECK(truncate_vector(once, 1.9) == once);
  CHECK(truncate_vector(y, 4.0) == y);
}

TEST_CASE("row-incoherence projection examples and properties") {
  // n=4, r=1, mu=1: threshold 0.5; a long row is rescaled onto it.
  DenseMatrix m(4, 1);
  m(0, 0) = 2.0;
  const DenseMatrix p = project_row_incoherent(m, 1.0);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(1, 0) == 0.0);

  // Interior points (all rows below threshold) pass through unchanged.
  DenseMatrix small(4, 1);
  small(0, 0) = 0.1;
  small(3, 0) = -0.2;
  CHECK(test::max_abs_diff(project_row_incoherent(small, 1.0), small) == 0.0);

  // Idempotence, no row norm ever increases, all outputs below threshold.
  const DenseMatrix rnd = test::random_matrix(20, 3, 17);
  const double mu = 1.1;
  const DenseMatrix once = project_row_incoherent(rnd, mu);
  const DenseMatrix twice = project_row_incoherent(once, mu);
  // Idempotent up to one rounding of the rescale factor.
  CHECK(test::max_abs_diff(once, twice) <= 1e-13);
  const double threshold = mu * std::sqrt(3.0 / 20.0);
  for (std::size_t i = 0; i < 20; ++i) {
    const double before = vec_norm(rnd.row_span(i));
    const double after = vec_norm(once.row_span(i));
    CHECK(after <= before + 1e-15);
    CHECK(after <= threshold + 1e-12);
  }
}

TEST_CASE("power method on a diagonal operator finds the top eigenvector") {
  DenseMatrix d(3, 3);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const auto apply = [&](const DenseMatrix& u) { return matmul(d, u); };
  const PowerMethodResult res = power_method_top_r(apply, 3, 1, 50, 5);
  const auto e1 = span_of({{1, 0, 0}});
  CHECK(subspace_distance(res.basis, e1, SubspaceNorm::kSpectral) <= 1e-6);
  CHECK(res.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("power method on the identity returns some orthonormal basis") {
  const auto apply = [](const DenseMatrix& u) { return u; };
  const PowerMethodResult res = power_method_top_r(apply, 5, 2, 50, 6);
  CHECK(res.basis.n() == 5);
  CHECK(res.basis.r() == 2);  // construction already validates orthonormality
  CHECK(res.iterations <= 2);  // immediate fixed point
}

TEST_CASE("power method matches the dense spectral oracle") {
  // Random rank-2 X0; operator X0 X0^T.
  const DenseMatrix left = gaussian_matrix(31, 18, 2);
  const DenseMatrix right = gaussian_matrix(32, 2, 25);
  const DenseMatrix x0 = matmul(left, right);
  const DenseMatrix gram = matmul(x0, x0.transposed());
  const auto apply = [&](const DenseMatrix& u) { return matmul(gram, u); };
  const PowerMethodResult res = power_method_top_r(apply, 18, 2, 100, 7);
  const OrthonormalBasis oracle =
      OrthonormalBasis(test::top_left_singular_oracle(x0, 2));
  CHECK(subspace_distance(res.basis, oracle, SubspaceNorm::kSpectral) <= 1e-8);
}

TEST_CASE("top-r left singular vectors: diagonal and rank-one cases") {
  // diag(3,2,1) padded to 3x5.
  DenseMatrix m(3, 5);
  m(0, 0) = 3.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  const OrthonormalBasis top2 = top_r_left_singular_vectors(m, 2);
  const auto want = span_of({{1, 0, 0}, {0, 1, 0}});
  CHECK(subspace_distance(top2, want, SubspaceNorm::kSpectral) <= 1e-8);

  // Rank-1 u v^T recovers span{u}.
  const auto u = orthonormalize_qr(gaussian_matrix(41, 12, 1)).q;
  const auto v = test::random_vector(7, 42, -1.0, 1.0);
  DenseMatrix rank1(12, 7);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 7; ++j) rank1(i, j) = u(i, 0) * v[j];
  const OrthonormalBasis got = top_r_left_singular_vectors(rank1, 1);
  CHECK(subspace_distance(got, u, SubspaceNorm::kSpectral) <= 1e-8);

  // r = min(n, q): only orthonormality is asserted (full singular space).
  const DenseMatrix sq = test::random_matrix(4, 6, 55);
  const OrthonormalBasis full = top_r_left_singular_vectors(sq, 4);
  CHECK(full.r() == 4);
  CHECK_THROWS_AS(top_r_left_singular_vectors(sq, 5), BadRank);
}

TEST_CASE("power method oracle property on gapped rank-5 instances") {
  // 20 x 30 rank-5 instances with spectral-gap ratio <= 0.5.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const OrthonormalBasis lu =
        orthonormalize_qr(gaussian_matrix(seed, 20, 5)).q;
    const OrthonormalBasis rv =
        orthonormalize_qr(gaussian_matrix(seed + 50, 30, 5)).q;
    const double sv[5] = {1.0, 0.95, 0.9, 0.85, 0.8};
    DenseMatrix m(20, 30);
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 30; ++j) {
        double s = 0.0;
        for (int c = 0; c < 5; ++c) s += sv[c] * lu(i, c) * rv(j, c);
        m(i, j) = s;  // sigma_6 = 0, gap ratio 0
      }
    const OrthonormalBasis got = top_r_left_singular_vectors(m, 5);
    const OrthonormalBasis oracle =
        OrthonormalBasis(test::top_left_singular_oracle(m, 5));
    CHECK(subspace_distance(got, oracle, SubspaceNorm::kSpectral) <= 1e-8);
  }
}

TEST_CASE("least squares: identity, averaging, consistent systems") {
  DenseMatrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  CHECK(least_squares(eye, std::vector<double>{3, 4}) ==
        std::vector<double>{3, 4});

  const DenseMatrix ones(3, 1, {1, 1, 1});
  const auto mean = least_squares(ones, std::vector<double>{1, 2, 3});
  CHECK(mean[0] == doctest::Approx(2.0).epsilon(1e-14));

  // Consistent system returns the planted solution.
  const DenseMatrix a = test::random_matrix(10, 3, 21);
  const std::vector<double> b0 = {0.3, -1.2, 2.5};
  const auto y = matvec(a, b0);
  const auto got = least_squares(a, y);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - b0[i]) <= 1e-10);

  // Residual orthogonal to the columns of A.
  const auto y2 = test::random_vector(10, 22);
  const auto b = least_squares(a, y2);
  auto res = matvec(a, b);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= y2[i];
  const auto atr = matvec_transposed(a, res);
  for (double v : atr) CHECK(std::abs(v) <= 1e-10);

  CHECK_THROWS_AS(least_squares(DenseMatrix(1, 2), std::vector<double>{1.0}),
                  RankDeficient);
}

TEST_CASE("singular values resolve the rank threshold") {
  // diag(1, 2e-12): sigma_min/sigma_1 = 2e-12 > 1e-12, so QR must succeed;
  // diag(1, 5e-13) must fail.
  DenseMatrix ok(2, 2);
  ok(0, 0) = 1.0;
  ok(1, 1) = 2e-12;
  CHECK_NOTHROW(orthonormalize_qr(ok));
  DenseMatrix bad(2, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = 5e-13;
  CHECK_THROWS_AS(orthonormalize_qr(bad), RankDeficient);

  const auto sv = singular_values(DenseMatrix(3, 2, {3, 0, 0, 2, 0, 0}));
  CHECK(sv[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sv[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("cholesky solves SPD systems and rejects singular ones") {
  const DenseMatrix a = test::random_matrix(6, 6, 77);
  DenseMatrix spd(6, 6);
  kernels::gemm_acc(spd.data(), a.transposed().data(), a.data(), 6, 6, 6);
  for (int i = 0; i < 6; ++i) spd(i, i) += 1.0;
  const auto x0 = test::random_vector(6, 78);
  const auto rhs = matvec(spd, x0);
  const auto got = cholesky_solve_spd(spd, rhs);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(got[i] - x0[i]) <= 1e-10);

  CHECK_THROWS_AS(cholesky_solve_spd(DenseMatrix(3, 3), {1, 2, 3}),
                  RankDeficient);
}

}  // TEST_SUITE

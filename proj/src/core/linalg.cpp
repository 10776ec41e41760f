#include "altgdmin/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

namespace {

constexpr double kRankRelTol = 1e-12;
constexpr double kPowerEarlyExit = 1e-12;
constexpr std::uint64_t kDefaultPowerSeed = 0x5DEECE66DULL;

void check_rank_from_r(const DenseMatrix& r_factor) {
  const std::vector<double> sv = singular_values(r_factor);
  if (sv.empty() || !(sv.back() > kRankRelTol * sv.front()))
    throw RankDeficient("matrix is numerically rank deficient");
}

}  // namespace

QrFactors orthonormalize_qr(const DenseMatrix& m) {
  const std::size_t n = m.rows(), r = m.cols();
  if (n < r) throw DimensionMismatch("orthonormalize_qr: needs rows >= cols");
  if (r == 0) throw DimensionMismatch("orthonormalize_qr: empty input");

  // Work column-contiguous: row i of `qt` is column i of Q.
  DenseMatrix qt = m.transposed();
  DenseMatrix r_factor(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    double* v = qt.row(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double c = kernels::dot(qt.row(i), v, n);
        r_factor(i, j) += c;
        kernels::axpy(n, -c, qt.row(i), v);
      }
    }
    const double norm = std::sqrt(kernels::nrm2sq(v, n));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw RankDeficient("orthonormalize_qr: zero column after projection");
    r_factor(j, j) = norm;
    kernels::scal(n, 1.0 / norm, v);
  }
  check_rank_from_r(r_factor);
  return {OrthonormalBasis(qt.transposed()), std::move(r_factor)};
}

double subspace_distance(const OrthonormalBasis& u1, const OrthonormalBasis& u2,
                         SubspaceNorm norm) {
  if (u1.n() != u2.n() || u1.r() != u2.r())
    throw DimensionMismatch("subspace_distance: shape mismatch");
  const std::size_t n = u1.n(), r = u1.r();
  // W = U2 - U1 (U1^T U2)
  const DenseMatrix u1t = u1.matrix().transposed();
  DenseMatrix t(r, r);
  kernels::gemm_acc(t.data(), u1t.data(), u2.matrix().data(), r, n, r);
  DenseMatrix w = u2.matrix();
  DenseMatrix u1t_neg(n, r);
  kernels::gemm_acc(u1t_neg.data(), u1.matrix().data(), t.data(), n, r, r);
  for (std::size_t i = 0; i < w.size(); ++i)
    w.data()[i] -= u1t_neg.data()[i];

  if (norm == SubspaceNorm::kFrobenius)
    return std::sqrt(kernels::nrm2sq(w.data(), w.size()));

  const DenseMatrix wt = w.transposed();
  DenseMatrix gram(r, r);
  kernels::gemm_acc(gram.data(), wt.data(), w.data(), r, n, r);
  const std::vector<double> eig = symmetric_eigenvalues(gram);
  return std::sqrt(std::max(eig.front(), 0.0));
}

std::vector<double> truncate_vector(std::span<const double> y, double alpha) {
  if (!(alpha > 0.0))
    throw NonPositiveThreshold("truncate_vector: alpha must be > 0");
  const double limit = std::sqrt(alpha);
  std::vector<double> out(y.begin(), y.end());
  for (double& v : out)
    if (std::abs(v) > limit) v = 0.0;
  return out;
}

DenseMatrix project_row_incoherent(const DenseMatrix& m, double mu) {
  if (!(mu > 0.0)) throw Error("project_row_incoherent: mu must be > 0");
  const std::size_t n = m.rows(), r = m.cols();
  const double threshold =
      mu * std::sqrt(static_cast<double>(r) / static_cast<double>(n));
  DenseMatrix out = m;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.row(i);
    const double norm = std::sqrt(kernels::nrm2sq(row, r));
    if (norm > threshold) kernels::scal(r, threshold / norm, row);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix s) {
  if (s.rows() != s.cols())
    throw DimensionMismatch("symmetric_eigenvalues: not square");
  const std::size_t n = s.rows();
  if (n == 0) return {};
  double scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    scale = std::max(scale, std::abs(s.data()[i]));
  const double tol = 1e-15 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(s(p, q)));
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (std::abs(apq) <= tol) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
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
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = s(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  // One-sided Jacobi on the columns (stored as rows of the transpose).
  DenseMatrix t = m.rows() >= m.cols() ? m.transposed() : m;
  const std::size_t r = t.rows(), n = t.cols();
  if (r == 0) return {};
  bool changed = true;
  for (int sweep = 0; sweep < 60 && changed; ++sweep) {
    changed = false;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        double* ti = t.row(i);
        double* tj = t.row(j);
        const double alpha = kernels::nrm2sq(ti, n);
        const double beta = kernels::nrm2sq(tj, n);
        const double gamma = kernels::dot(ti, tj, n);
        if (std::abs(gamma) <=
            1e-16 * std::sqrt(alpha * beta) + 1e-300)
          continue;
        changed = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double tt = (zeta >= 0.0 ? 1.0 : -1.0) /
                          (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double sn = c * tt;
        for (std::size_t k = 0; k < n; ++k) {
          const double a = ti[k], b = tj[k];
          ti[k] = c * a - sn * b;
          tj[k] = sn * a + c * b;
        }
      }
    }
  }
  std::vector<double> sv(r);
  for (std::size_t i = 0; i < r; ++i)
    sv[i] = std::sqrt(kernels::nrm2sq(t.row(i), n));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

PowerMethodResult power_method_top_r(const LinearOperator& apply,
                                     std::size_t n, std::size_t r, int iters,
                                     std::uint64_t seed) {
  if (iters < 1) throw Error("power_method_top_r: iters must be >= 1");
  if (r > n) throw BadRank("power_method_top_r: r > n");
  QrFactors start = orthonormalize_qr(gaussian_matrix(seed, n, r));
  OrthonormalBasis u = std::move(start.q);
  PowerMethodResult result;
  result.eigenvalues.assign(r, 0.0);
  for (int it = 1; it <= iters; ++it) {
    QrFactors f = orthonormalize_qr(apply(u.matrix()));
    for (std::size_t i = 0; i < r; ++i) result.eigenvalues[i] = f.r(i, i);
    const double step = subspace_distance(f.q, u, SubspaceNorm::kSpectral);
    u = std::move(f.q);
    result.iterations = it;
    if (step <= kPowerEarlyExit) break;
  }
  result.basis = std::move(u);
  return result;
}

int default_power_iters(std::size_t dim) {
  const double d = static_cast<double>(std::max<std::size_t>(dim, 2));
  return static_cast<int>(std::ceil(10.0 * std::log2(d)));
}

OrthonormalBasis top_r_left_singular_vectors(const DenseMatrix& m,
                                             std::size_t r) {
  if (r == 0 || r > std::min(m.rows(), m.cols()))
    throw BadRank("top_r_left_singular_vectors: bad rank");
  const DenseMatrix mt = m.transposed();
  const auto apply = [&](const DenseMatrix& u) {
    DenseMatrix inner(m.cols(), u.cols());
    kernels::gemm_acc(inner.data(), mt.data(), u.data(), m.cols(), m.rows(),
                      u.cols());
    DenseMatrix out(m.rows(), u.cols());
    kernels::gemm_acc(out.data(), m.data(), inner.data(), m.rows(), m.cols(),
                      u.cols());
    return out;
  };
  return power_method_top_r(apply, m.rows(), r,
                            default_power_iters(std::max(m.rows(), m.cols())),
                            kDefaultPowerSeed)
      .basis;
}

std::vector<double> least_squares(const DenseMatrix& a,
                                  std::span<const double> y) {
  const std::size_t m = a.rows(), r = a.cols();
  if (y.size() != m) throw DimensionMismatch("least_squares: bad rhs length");
  if (m < r) throw RankDeficient("least_squares: underdetermined system");
  QrFactors f = orthonormalize_qr(a);
  const std::vector<double> z = matvec_transposed(f.q.matrix(), y);
  std::vector<double> b(r, 0.0);
  for (std::size_t i = r; i-- > 0;) {
    double s = z[i];
    for (std::size_t j = i + 1; j < r; ++j) s -= f.r(i, j) * b[j];
    b[i] = s / f.r(i, i);
  }
  return b;
}

std::vector<double> cholesky_solve_spd(DenseMatrix a, std::vector<double> rhs) {
  const std::size_t n = a.rows();
  if (a.cols() != n || rhs.size() != n)
    throw DimensionMismatch("cholesky_solve_spd: shape mismatch");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double tol = 1e-13 * std::max(max_diag, 1e-300);
  // In-place lower Cholesky.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j) - kernels::nrm2sq(a.row(j), j);
    if (!(d > tol)) throw RankDeficient("cholesky_solve_spd: not SPD");
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double v = (a(i, j) - kernels::dot(a.row(i), a.row(j), j)) / d;
      a(i, j) = v;
    }
  }
  // Forward then backward substitution.
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i] - kernels::dot(a.row(i), rhs.data(), i);
    rhs[i] = s / a(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(k, i) * rhs[k];
    rhs[i] = s / a(i, i);
  }
  return rhs;
}

}  // namespace altgdmin

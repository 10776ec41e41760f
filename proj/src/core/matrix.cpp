#include "altgdmin/core/matrix.hpp"

#include <cmath>

#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

OrthonormalBasis::OrthonormalBasis(DenseMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.rows(), r = m_.cols();
  if (r > n) throw DimensionMismatch("OrthonormalBasis: more columns than rows");
  if (r == 0) throw DimensionMismatch("OrthonormalBasis: empty basis");
  // Gram check: columns are not contiguous row-major, go through a transpose.
  const DenseMatrix t = m_.transposed();  // r x n, rows are basis columns
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      const double g = kernels::dot(t.row(i), t.row(j), n);
      const double want = (i == j) ? 1.0 : 0.0;
      if (!(std::abs(g - want) <= kOrthoTolerance))
        throw Error("OrthonormalBasis: columns not orthonormal");
    }
  }
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  matmul_acc(c, a, b);
  return c;
}

void matmul_acc(DenseMatrix& c, const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw DimensionMismatch("matmul: incompatible shapes");
  kernels::gemm_acc(c.data(), a.data(), b.data(), a.rows(), a.cols(),
                    b.cols());
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DimensionMismatch("matvec: bad length");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    y[i] = kernels::dot(a.row(i), x.data(), a.cols());
  return y;
}

std::vector<double> matvec_transposed(const DenseMatrix& a,
                                      std::span<const double> w) {
  if (w.size() != a.rows())
    throw DimensionMismatch("matvec_transposed: bad length");
  std::vector<double> z(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    kernels::axpy(a.cols(), w[i], a.row(i), z.data());
  return z;
}

double vec_dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  return kernels::dot(x.data(), y.data(), x.size());
}

double vec_norm(std::span<const double> x) {
  return std::sqrt(kernels::nrm2sq(x.data(), x.size()));
}

}  // namespace altgdmin

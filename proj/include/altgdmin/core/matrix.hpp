#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "altgdmin/errors.hpp"

namespace altgdmin {

/// Dense real matrix, row-major. Vectors are 1-column or 1-row views on the
/// caller side; a handful of free helpers below cover the common products.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero-filled rows x cols.
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  /// Takes ownership of row-major entries; rejects NaN/Inf and size mismatch.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionMismatch("DenseMatrix: entry count != rows*cols");
    if (!is_finite())
      throw Error("DenseMatrix: non-finite entry on construction");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::span<const double> row_span(std::size_t i) const {
    return {row(i), cols_};
  }

  const std::vector<double>& entries() const { return data_; }

  bool is_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  void fill(double v) {
    for (double& x : data_) x = v;
  }

  /// Column j as a contiguous vector (copy; rows are the contiguous axis).
  std::vector<double> col(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
    return out;
  }

  void set_col(std::size_t j, std::span<const double> v) {
    for (std::size_t i = 0; i < rows_; ++i) data_[i * cols_ + j] = v[i];
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// n x r matrix with orthonormal columns, validated on construction:
/// max|Q^T Q - I| <= 1e-10 and r <= n.
class OrthonormalBasis {
 public:
  static constexpr double kOrthoTolerance = 1e-10;

  OrthonormalBasis() = default;
  explicit OrthonormalBasis(DenseMatrix m);

  const DenseMatrix& matrix() const { return m_; }
  std::size_t n() const { return m_.rows(); }
  std::size_t r() const { return m_.cols(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend bool operator==(const OrthonormalBasis& a, const OrthonormalBasis& b) {
    return a.m_ == b.m_;
  }

 private:
  DenseMatrix m_;
};

// ---- small dense products built on the kernels layer ----

/// out = A * B (allocates). Throws DimensionMismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// c += A * B into an existing matrix of the right shape.
void matmul_acc(DenseMatrix& c, const DenseMatrix& a, const DenseMatrix& b);

/// y = A * x for row-major A (m x n), x length n.
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

/// z = A^T * w for row-major A (m x n), w length m.
std::vector<double> matvec_transposed(const DenseMatrix& a,
                                      std::span<const double> w);

/// Canonical dot product of two equal-length vectors.
double vec_dot(std::span<const double> x, std::span<const double> y);

double vec_norm(std::span<const double> x);

}  // namespace altgdmin

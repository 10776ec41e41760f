#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "altgdmin/core/matrix.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/problems/ground_truth.hpp"

namespace altgdmin {

enum class OperatorKind {
  kGaussian,
  kIdentity,  // testing hook: A_k = I_n (requires m == n)
};

/// Column-wise compressed measurements y_k = A_k x*_k. Operators are stored
/// as per-column seeds and regenerated bit-identically on demand, so the
/// dataset footprint is O(mq) instead of O(mnq).
struct LrcsData {
  std::size_t n = 0, q = 0, m = 0;
  OperatorKind kind = OperatorKind::kGaussian;
  std::vector<std::uint64_t> operator_seeds;  // one per column
  DenseMatrix y;                              // m x q
  double noise_sigma = 0.0;

  DenseMatrix operator_matrix(std::size_t k) const;
};

LrcsData lrcs_measure(const GroundTruth& gt, std::size_t m, std::uint64_t seed,
                      double noise_sigma = 0.0);

/// Testing hook: identity operators, y_k = x*_k.
LrcsData lrcs_measure_identity(const GroundTruth& gt);

/// Phaseless variant: z_k = |A_k x*_k| elementwise, sharing the LRCS seed
/// derivation bit for bit.
struct LrprData {
  std::size_t n = 0, q = 0, m = 0;
  OperatorKind kind = OperatorKind::kGaussian;
  std::vector<std::uint64_t> operator_seeds;
  DenseMatrix z;  // m x q, nonnegative

  DenseMatrix operator_matrix(std::size_t k) const;
};

LrprData lrpr_measure(const GroundTruth& gt, std::size_t m, std::uint64_t seed);

/// Bernoulli(p) entrywise observations, stored per column (sorted row
/// indices plus the exact observed values).
struct LrmcData {
  std::size_t n = 0, q = 0;
  double p = 1.0;
  std::vector<std::uint32_t> col_ptr;   // size q+1
  std::vector<std::uint32_t> row_idx;   // sorted within each column
  std::vector<double> values;           // aligned with row_idx
  double noise_sigma = 0.0;

  std::size_t omega_size() const { return row_idx.size(); }
  std::span<const std::uint32_t> rows_of(std::size_t k) const {
    return {row_idx.data() + col_ptr[k], col_ptr[k + 1] - col_ptr[k]};
  }
  std::span<const double> values_of(std::size_t k) const {
    return {values.data() + col_ptr[k], col_ptr[k + 1] - col_ptr[k]};
  }
  /// Zero-filled observed matrix Y (n x q).
  DenseMatrix dense_zero_filled() const;
};

LrmcData lrmc_sample(const GroundTruth& gt, double p, std::uint64_t seed,
                     double noise_sigma = 0.0);

// Uniform forward-operator interface: A_k x for LRCS/LRPR, row selection for
// LRMC. Adjoints satisfy <forward(x), w> == <x, adjoint(w)>.
std::vector<double> apply_forward(const LrcsData& d, std::size_t k,
                                  std::span<const double> x);
std::vector<double> apply_adjoint(const LrcsData& d, std::size_t k,
                                  std::span<const double> w);
std::vector<double> apply_forward(const LrprData& d, std::size_t k,
                                  std::span<const double> x);
std::vector<double> apply_adjoint(const LrprData& d, std::size_t k,
                                  std::span<const double> w);
std::vector<double> apply_forward(const LrmcData& d, std::size_t k,
                                  std::span<const double> x);
std::vector<double> apply_adjoint(const LrmcData& d, std::size_t k,
                                  std::span<const double> w);

}  // namespace altgdmin

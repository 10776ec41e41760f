#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

#include "altgdmin/core/matrix.hpp"
#include "altgdmin/errors.hpp"

namespace altgdmin {

/// Exact fixed-point accumulator for binary64 summands.
///
/// The running sum is held as sum(limb[d] * 2^(32*d - 1074)), wide enough to
/// cover the full double exponent range, so additions and merges are exact
/// integer arithmetic: the result of round() depends only on the multiset of
/// added values, never on ordering, grouping, or thread schedule. Cross-node
/// gradient aggregation uses this so that a federated run reproduces the
/// centralized one bit for bit at any node count.
///
/// Capacity: 2^30 raw additions between compactions (enforced internally).
class ExactAccumulator {
 public:
  static constexpr std::size_t kLimbs = 67;

  ExactAccumulator() { reset(); }

  void reset() {
    limbs_.fill(0);
    pending_ = 0;
  }

  /// Adds a finite double exactly. Throws on NaN/Inf.
  void add(double x);

  /// Adds the exact content of another accumulator.
  void merge(const ExactAccumulator& other);

  /// Correctly rounded (nearest-even) double value of the exact sum.
  double round() const;

 private:
  void compact();

  std::array<std::int64_t, kLimbs> limbs_;
  std::uint32_t pending_ = 0;  // raw adds since last compaction
};

/// Grid of exact accumulators for an n x r matrix reduction.
class ExactMatrixAccumulator {
 public:
  ExactMatrixAccumulator(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void reset() {
    for (auto& c : cells_) c.reset();
  }

  ExactAccumulator& at(std::size_t i, std::size_t j) {
    return cells_[i * cols_ + j];
  }

  /// cell(i,j) += w[i] * b[j]; the products are ordinary double products,
  /// the accumulation is exact.
  void add_outer(std::span<const double> w, std::span<const double> b);

  /// Sparse rows variant: cell(rows[t], j) += w[t] * b[j].
  void add_outer_rows(std::span<const std::uint32_t> row_idx,
                      std::span<const double> w, std::span<const double> b);

  void add_matrix(const DenseMatrix& m);

  void merge(const ExactMatrixAccumulator& other);

  /// Rounds every cell into `out` (must already have the right shape).
  void round_into(DenseMatrix& out) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<ExactAccumulator> cells_;
};

}  // namespace altgdmin

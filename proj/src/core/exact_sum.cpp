#include "altgdmin/core/exact_sum.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace altgdmin {

namespace {

constexpr std::uint32_t kCompactThreshold = 1u << 30;

// limb layout: value = sum limb[d] * 2^(32d - 1074).
// A finite double decomposes as mantissa * 2^(shift - 1074) with
// mantissa < 2^53 and shift = biased_exponent - 1 (0 for subnormals).

struct Decomposed {
  std::uint64_t mantissa;
  unsigned shift;
  bool negative;
};

inline Decomposed decompose(double x) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  const unsigned exp = static_cast<unsigned>((bits >> 52) & 0x7FFu);
  const std::uint64_t frac = bits & 0xFFFFFFFFFFFFFull;
  if (exp == 0x7FFu) throw Error("ExactAccumulator: non-finite summand");
  Decomposed d;
  d.negative = (bits >> 63) != 0;
  if (exp == 0) {
    d.mantissa = frac;
    d.shift = 0;
  } else {
    d.mantissa = frac | (1ull << 52);
    d.shift = exp - 1;
  }
  return d;
}

}  // namespace

void ExactAccumulator::add(double x) {
  if (x == 0.0) return;
  const Decomposed d = decompose(x);
  const std::size_t limb = d.shift >> 5;
  const unsigned off = d.shift & 31u;
  const unsigned __int128 wide = static_cast<unsigned __int128>(d.mantissa)
                                 << off;
  const std::int64_t d0 = static_cast<std::int64_t>(
      static_cast<std::uint32_t>(static_cast<std::uint64_t>(wide)));
  const std::int64_t d1 = static_cast<std::int64_t>(
      static_cast<std::uint32_t>(static_cast<std::uint64_t>(wide >> 32)));
  const std::int64_t d2 = static_cast<std::int64_t>(
      static_cast<std::uint32_t>(static_cast<std::uint64_t>(wide >> 64)));
  if (d.negative) {
    limbs_[limb] -= d0;
    limbs_[limb + 1] -= d1;
    limbs_[limb + 2] -= d2;
  } else {
    limbs_[limb] += d0;
    limbs_[limb + 1] += d1;
    limbs_[limb + 2] += d2;
  }
  if (++pending_ >= kCompactThreshold) compact();
}

void ExactAccumulator::merge(const ExactAccumulator& other) {
  if (pending_ >= kCompactThreshold - other.pending_) compact();
  for (std::size_t d = 0; d < kLimbs; ++d) limbs_[d] += other.limbs_[d];
  pending_ += other.pending_;
  if (pending_ >= kCompactThreshold) compact();
}

void ExactAccumulator::compact() {
  for (std::size_t d = 0; d + 1 < kLimbs; ++d) {
    const std::int64_t v = limbs_[d];
    const std::int64_t digit = v & 0xFFFFFFFFll;
    limbs_[d] = digit;
    limbs_[d + 1] += (v - digit) >> 32;
  }
  pending_ = 1;
}

double ExactAccumulator::round() const {
  // Work on a canonicalized copy: digits in [0, 2^32), top limb signed.
  std::array<std::int64_t, kLimbs> w = limbs_;
  auto propagate = [&w] {
    for (std::size_t d = 0; d + 1 < kLimbs; ++d) {
      const std::int64_t v = w[d];
      const std::int64_t digit = v & 0xFFFFFFFFll;
      w[d] = digit;
      w[d + 1] += (v - digit) >> 32;
    }
  };
  propagate();
  double sign = 1.0;
  if (w[kLimbs - 1] < 0) {
    sign = -1.0;
    for (auto& v : w) v = -v;
    propagate();
  }

  int top = static_cast<int>(kLimbs) - 1;
  while (top >= 0 && w[top] == 0) --top;
  if (top < 0) return 0.0;

  // Highest set bit position (bit 0 has weight 2^-1074).
  const std::uint64_t top_digit = static_cast<std::uint64_t>(w[top]);
  const int high_bit =
      32 * top + (63 - std::countl_zero(top_digit));

  auto get_bit = [&w](int pos) -> unsigned {
    if (pos < 0) return 0;
    return static_cast<unsigned>(
        (static_cast<std::uint64_t>(w[pos >> 5]) >> (pos & 31)) & 1u);
  };

  if (high_bit <= 52) {
    const std::uint64_t lo = static_cast<std::uint64_t>(w[0]);
    const std::uint64_t hi = kLimbs > 1 ? static_cast<std::uint64_t>(w[1]) : 0;
    const std::uint64_t mant = lo | (hi << 32);
    return sign * std::ldexp(static_cast<double>(mant), -1074);
  }

  std::uint64_t mant = 0;
  for (int pos = high_bit; pos >= high_bit - 52; --pos)
    mant = (mant << 1) | get_bit(pos);
  const unsigned guard = get_bit(high_bit - 53);
  bool sticky = false;
  const int sticky_top = high_bit - 54;
  if (sticky_top >= 0) {
    const int full_digits = (sticky_top + 1) >> 5;
    for (int d = 0; d < full_digits && !sticky; ++d) sticky = w[d] != 0;
    const int rem = (sticky_top + 1) & 31;
    if (!sticky && rem > 0) {
      const std::uint64_t mask = (1ull << rem) - 1;
      sticky = (static_cast<std::uint64_t>(w[full_digits]) & mask) != 0;
    }
  }
  int exp2 = high_bit - 52 - 1074;
  if (guard && (sticky || (mant & 1))) {
    ++mant;
    if (mant == (1ull << 53)) {
      mant >>= 1;
      ++exp2;
    }
  }
  return sign * std::ldexp(static_cast<double>(mant), exp2);
}

void ExactMatrixAccumulator::add_outer(std::span<const double> w,
                                       std::span<const double> b) {
  if (w.size() != rows_ || b.size() != cols_)
    throw DimensionMismatch("ExactMatrixAccumulator::add_outer");
  for (std::size_t i = 0; i < rows_; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    ExactAccumulator* cell = &cells_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) cell[j].add(wi * b[j]);
  }
}

void ExactMatrixAccumulator::add_outer_rows(
    std::span<const std::uint32_t> row_idx, std::span<const double> w,
    std::span<const double> b) {
  if (row_idx.size() != w.size() || b.size() != cols_)
    throw DimensionMismatch("ExactMatrixAccumulator::add_outer_rows");
  for (std::size_t t = 0; t < row_idx.size(); ++t) {
    const double wt = w[t];
    if (wt == 0.0) continue;
    ExactAccumulator* cell = &cells_[row_idx[t] * cols_];
    for (std::size_t j = 0; j < cols_; ++j) cell[j].add(wt * b[j]);
  }
}

void ExactMatrixAccumulator::add_matrix(const DenseMatrix& m) {
  if (m.rows() != rows_ || m.cols() != cols_)
    throw DimensionMismatch("ExactMatrixAccumulator::add_matrix");
  const double* p = m.data();
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].add(p[i]);
}

void ExactMatrixAccumulator::merge(const ExactMatrixAccumulator& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw DimensionMismatch("ExactMatrixAccumulator::merge");
  for (std::size_t i = 0; i < cells_.size(); ++i)
    cells_[i].merge(other.cells_[i]);
}

void ExactMatrixAccumulator::round_into(DenseMatrix& out) const {
  if (out.rows() != rows_ || out.cols() != cols_)
    throw DimensionMismatch("ExactMatrixAccumulator::round_into");
  double* p = out.data();
  for (std::size_t i = 0; i < cells_.size(); ++i) p[i] = cells_[i].round();
}

}  // namespace altgdmin

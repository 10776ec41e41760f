#include "altgdmin/problems/measure.hpp"

#include <cmath>

#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

namespace {

// Sub-stream tags for per-column derived seeds.
constexpr std::uint64_t kOperatorStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

DenseMatrix identity_matrix(std::size_t n) {
  DenseMatrix eye(n, n);
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

void check_column(std::size_t k, std::size_t q) {
  if (k >= q) throw BadColumn("column index out of range");
}

}  // namespace

DenseMatrix LrcsData::operator_matrix(std::size_t k) const {
  check_column(k, q);
  if (kind == OperatorKind::kIdentity) return identity_matrix(n);
  return gaussian_matrix(operator_seeds[k], m, n);
}

DenseMatrix LrprData::operator_matrix(std::size_t k) const {
  check_column(k, q);
  if (kind == OperatorKind::kIdentity) return identity_matrix(n);
  return gaussian_matrix(operator_seeds[k], m, n);
}

LrcsData lrcs_measure(const GroundTruth& gt, std::size_t m, std::uint64_t seed,
                      double noise_sigma) {
  if (m < 1) throw ConfigError("lrcs_measure: m must be >= 1");
  LrcsData d;
  d.n = gt.n;
  d.q = gt.q;
  d.m = m;
  d.noise_sigma = noise_sigma;
  d.operator_seeds.resize(gt.q);
  d.y = DenseMatrix(m, gt.q);
  for (std::size_t k = 0; k < gt.q; ++k) {
    d.operator_seeds[k] = derive_seed(seed, k, kOperatorStream);
    const DenseMatrix a = gaussian_matrix(d.operator_seeds[k], m, gt.n);
    std::vector<double> yk = matvec(a, gt.column(k));
    if (noise_sigma > 0.0) {
      Rng noise(derive_seed(seed, k, kNoiseStream));
      for (double& v : yk) v += noise_sigma * noise.next_gaussian();
    }
    d.y.set_col(k, yk);
  }
  return d;
}

LrcsData lrcs_measure_identity(const GroundTruth& gt) {
  LrcsData d;
  d.n = gt.n;
  d.q = gt.q;
  d.m = gt.n;
  d.kind = OperatorKind::kIdentity;
  d.operator_seeds.assign(gt.q, 0);
  d.y = gt.dense();
  return d;
}

LrprData lrpr_measure(const GroundTruth& gt, std::size_t m,
                      std::uint64_t seed) {
  const LrcsData lin = lrcs_measure(gt, m, seed);
  LrprData d;
  d.n = lin.n;
  d.q = lin.q;
  d.m = lin.m;
  d.kind = lin.kind;
  d.operator_seeds = lin.operator_seeds;
  d.z = lin.y;
  for (std::size_t i = 0; i < d.z.size(); ++i)
    d.z.data()[i] = std::abs(d.z.data()[i]);
  return d;
}

DenseMatrix LrmcData::dense_zero_filled() const {
  DenseMatrix out(n, q);
  for (std::size_t k = 0; k < q; ++k) {
    const auto rows = rows_of(k);
    const auto vals = values_of(k);
    for (std::size_t t = 0; t < rows.size(); ++t) out(rows[t], k) = vals[t];
  }
  return out;
}

LrmcData lrmc_sample(const GroundTruth& gt, double p, std::uint64_t seed,
                     double noise_sigma) {
  if (!(p > 0.0 && p <= 1.0))
    throw ConfigError("lrmc_sample: p must lie in (0, 1]");
  LrmcData d;
  d.n = gt.n;
  d.q = gt.q;
  d.p = p;
  d.noise_sigma = noise_sigma;
  d.col_ptr.assign(gt.q + 1, 0);
  for (std::size_t k = 0; k < gt.q; ++k) {
    // Per-column derived streams keep sampling independent of any parallel
    // generation schedule.
    Rng mask(derive_seed(seed, k, kOperatorStream));
    Rng noise(derive_seed(seed, k, kNoiseStream));
    const std::vector<double> xk = gt.column(k);
    for (std::size_t j = 0; j < gt.n; ++j) {
      if (mask.next_unit() < p) {
        d.row_idx.push_back(static_cast<std::uint32_t>(j));
        double v = xk[j];
        if (noise_sigma > 0.0) v += noise_sigma * noise.next_gaussian();
        d.values.push_back(v);
      }
    }
    d.col_ptr[k + 1] = static_cast<std::uint32_t>(d.row_idx.size());
  }
  return d;
}

std::vector<double> apply_forward(const LrcsData& d, std::size_t k,
                                  std::span<const double> x) {
  check_column(k, d.q);
  if (x.size() != d.n) throw DimensionMismatch("apply_forward: bad length");
  if (d.kind == OperatorKind::kIdentity)
    return std::vector<double>(x.begin(), x.end());
  return matvec(gaussian_matrix(d.operator_seeds[k], d.m, d.n), x);
}

std::vector<double> apply_adjoint(const LrcsData& d, std::size_t k,
                                  std::span<const double> w) {
  check_column(k, d.q);
  if (w.size() != d.m) throw DimensionMismatch("apply_adjoint: bad length");
  if (d.kind == OperatorKind::kIdentity)
    return std::vector<double>(w.begin(), w.end());
  return matvec_transposed(gaussian_matrix(d.operator_seeds[k], d.m, d.n), w);
}

std::vector<double> apply_forward(const LrprData& d, std::size_t k,
                                  std::span<const double> x) {
  check_column(k, d.q);
  if (x.size() != d.n) throw DimensionMismatch("apply_forward: bad length");
  if (d.kind == OperatorKind::kIdentity)
    return std::vector<double>(x.begin(), x.end());
  return matvec(gaussian_matrix(d.operator_seeds[k], d.m, d.n), x);
}

std::vector<double> apply_adjoint(const LrprData& d, std::size_t k,
                                  std::span<const double> w) {
  check_column(k, d.q);
  if (w.size() != d.m) throw DimensionMismatch("apply_adjoint: bad length");
  if (d.kind == OperatorKind::kIdentity)
    return std::vector<double>(w.begin(), w.end());
  return matvec_transposed(gaussian_matrix(d.operator_seeds[k], d.m, d.n), w);
}

std::vector<double> apply_forward(const LrmcData& d, std::size_t k,
                                  std::span<const double> x) {
  check_column(k, d.q);
  if (x.size() != d.n) throw DimensionMismatch("apply_forward: bad length");
  const auto rows = d.rows_of(k);
  std::vector<double> out(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) out[t] = x[rows[t]];
  return out;
}

std::vector<double> apply_adjoint(const LrmcData& d, std::size_t k,
                                  std::span<const double> w) {
  check_column(k, d.q);
  const auto rows = d.rows_of(k);
  if (w.size() != rows.size())
    throw DimensionMismatch("apply_adjoint: bad length");
  std::vector<double> out(d.n, 0.0);
  for (std::size_t t = 0; t < rows.size(); ++t) out[rows[t]] = w[t];
  return out;
}

}  // namespace altgdmin

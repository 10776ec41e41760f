#include "altgdmin/solvers/models.hpp"

#include <algorithm>
#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin {

namespace {

constexpr std::uint64_t kLrprWarmStream = 0x7072u;

// A_slice (rows x n, a contiguous row block of A) times U, computed as dots
// against the transposed basis so the vector kernels run over length-n
// spans instead of length-r ones.
DenseMatrix rows_times(const double* a_rows, std::size_t rows, std::size_t n,
                       const DenseMatrix& ut) {
  const std::size_t r = ut.rows();
  DenseMatrix out(rows, r);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* arow = a_rows + i * n;
    double* orow = out.row(i);
    for (std::size_t c = 0; c < r; ++c)
      orow[c] = kernels::dot(arow, ut.row(c), n);
  }
  return out;
}

double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_split_groups(
    std::size_t count, std::size_t r, int t_max) {
  const std::size_t min_rows = 2 * r + 2;
  std::size_t groups = count / std::max<std::size_t>(min_rows, 1);
  groups = std::min<std::size_t>(groups, static_cast<std::size_t>(t_max) + 1);
  groups = std::max<std::size_t>(groups, 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    out[g] = {static_cast<std::uint32_t>(g * count / groups),
              static_cast<std::uint32_t>((g + 1) * count / groups)};
  }
  return out;
}

std::size_t sample_split_group_for(std::size_t num_groups, int t) {
  if (t <= 0 || num_groups <= 1) return 0;
  if (num_groups == 2) return 1;
  return 1 + static_cast<std::size_t>(t - 1) % (num_groups - 1);
}

// ---------------------------------------------------------------------------
// LRCS
// ---------------------------------------------------------------------------

class LrcsModel final : public ColumnModel {
 public:
  LrcsModel(const LrcsData& data, std::size_t r, const SolverConfig& cfg)
      : data_(data), r_(r), y_cols_(data.y.transposed()) {
    if (r_ == 0 || r_ > std::min(data_.n, data_.q))
      throw BadRank("lrcs: need 1 <= r <= min(n,q)");
    ops_.reserve(data_.q);
    for (std::size_t k = 0; k < data_.q; ++k)
      ops_.push_back(data_.operator_matrix(k));
    if (cfg.sample_split)
      shards_ = sample_split_groups(data_.m, r_, cfg.t_max);
    else
      shards_ = {{0, static_cast<std::uint32_t>(data_.m)}};
    x0_cols_ = DenseMatrix(data_.q, data_.n);
    begin_iteration(0);
  }

  ProblemKind kind() const override { return ProblemKind::kLrcs; }
  std::size_t q() const override { return data_.q; }
  std::size_t n() const override { return data_.n; }
  std::size_t r() const override { return r_; }

  bool needs_alpha_round() const override { return true; }

  double column_energy(std::size_t k, flops::Counter& fc) const override {
    const auto [sb, se] = shards_[0];
    fc.add(flops::dot(se - sb));
    return kernels::nrm2sq(y_cols_.row(k) + sb, se - sb);
  }

  double alpha_samples() const override {
    return static_cast<double>(shards_[0].second - shards_[0].first);
  }

  void set_alpha(double alpha) override { alpha_ = alpha; }

  void prepare_init_column(std::size_t k, flops::Counter& fc) override {
    const auto [sb, se] = shards_[0];
    const std::size_t m0 = se - sb;
    const std::vector<double> trunc = truncate_vector(
        std::span<const double>(y_cols_.row(k) + sb, m0), alpha_);
    double* x0 = x0_cols_.row(k);
    std::fill(x0, x0 + data_.n, 0.0);
    const DenseMatrix& a = ops_[k];
    for (std::size_t i = 0; i < m0; ++i)
      kernels::axpy(data_.n, trunc[i], a.row(sb + i), x0);
    fc.add(flops::gemv(m0, data_.n));
  }

  void init_contribution(const DenseMatrix& u, std::size_t k,
                         InitContribution& out,
                         flops::Counter& fc) override {
    // X0 X0^T U = sum_k x0_k (x0_k^T U).
    out.rows = {};
    out.w.assign(x0_cols_.row(k), x0_cols_.row(k) + data_.n);
    out.s.assign(r_, 0.0);
    for (std::size_t i = 0; i < data_.n; ++i)
      kernels::axpy(r_, out.w[i], u.row(i), out.s.data());
    fc.add(flops::gemv(data_.n, r_));
    fc.add(2ull * data_.n * r_);
  }

  OrthonormalBasis finalize_init(OrthonormalBasis u00,
                                 flops::Counter&) const override {
    return u00;
  }

  double sigma_from_init(double lambda_top, double) const override {
    return std::sqrt(std::max(lambda_top, 0.0)) / alpha_samples();
  }

  void begin_iteration(int t) override {
    const auto [sb, se] = shards_[sample_split_group_for(shards_.size(), t)];
    shard_begin_ = sb;
    shard_end_ = se;
  }

  double eta_denominator() const override {
    return static_cast<double>(shard_end_ - shard_begin_);
  }

  void begin_pass(const DenseMatrix& u) override { ut_ = u.transposed(); }

  void process_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                      std::vector<double>& w, double& objective,
                      ColumnStatus& status, flops::Counter& fc) override {
    (void)u;
    status = {};
    const std::size_t mt = shard_end_ - shard_begin_;
    const DenseMatrix& a = ops_[k];
    const DenseMatrix au = rows_times(a.row(shard_begin_), mt, data_.n, ut_);
    fc.add(flops::gemm(mt, data_.n, r_));
    const std::span<const double> yk(y_cols_.row(k) + shard_begin_, mt);
    const std::vector<double> bk = least_squares(au, yk);
    fc.add(flops::least_squares(mt, r_));
    std::copy(bk.begin(), bk.end(), b.begin());

    std::vector<double> res = matvec(au, bk);
    fc.add(flops::gemv(mt, r_));
    for (std::size_t i = 0; i < mt; ++i) res[i] -= yk[i];
    objective = kernels::nrm2sq(res.data(), mt);
    fc.add(flops::dot(mt));

    w.assign(data_.n, 0.0);
    for (std::size_t i = 0; i < mt; ++i)
      kernels::axpy(data_.n, res[i], a.row(shard_begin_ + i), w.data());
    fc.add(flops::gemv(mt, data_.n));
    fc.add(2ull * data_.n * r_);  // outer-product accumulation w b^T
  }

  std::span<const std::uint32_t> grad_rows(std::size_t) const override {
    return {};
  }

  void update_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                     ColumnStatus& status, flops::Counter& fc) override {
    (void)u;
    status = {};
    const std::size_t mt = shard_end_ - shard_begin_;
    const DenseMatrix& a = ops_[k];
    const DenseMatrix au = rows_times(a.row(shard_begin_), mt, data_.n, ut_);
    fc.add(flops::gemm(mt, data_.n, r_));
    const std::span<const double> yk(y_cols_.row(k) + shard_begin_, mt);
    const std::vector<double> bk = least_squares(au, yk);
    fc.add(flops::least_squares(mt, r_));
    std::copy(bk.begin(), bk.end(), b.begin());
  }

  void residual_terms(const DenseMatrix& u, std::span<const double> b,
                      std::size_t k, double* res_sq,
                      double* ref_sq) const override {
    const DenseMatrix& a = ops_[k];
    const std::vector<double> xhat = matvec(u, b);
    std::vector<double> ax = matvec(a, xhat);
    const double* yk = y_cols_.row(k);
    for (std::size_t i = 0; i < data_.m; ++i) ax[i] -= yk[i];
    *res_sq = kernels::nrm2sq(ax.data(), data_.m);
    *ref_sq = kernels::nrm2sq(yk, data_.m);
  }

  void error_terms(const DenseMatrix& u, std::span<const double> b,
                   std::size_t k, const GroundTruth& gt, double* diff_sq,
                   double* ref_sq) const override {
    std::vector<double> xhat = matvec(u, b);
    const std::vector<double> xstar = gt.column(k);
    for (std::size_t i = 0; i < xhat.size(); ++i) xhat[i] -= xstar[i];
    *diff_sq = kernels::nrm2sq(xhat.data(), xhat.size());
    *ref_sq = kernels::nrm2sq(xstar.data(), xstar.size());
  }

 private:
  const LrcsData& data_;
  std::size_t r_;
  DenseMatrix y_cols_;  // q x m, row k = y_k
  std::vector<DenseMatrix> ops_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shards_;
  std::uint32_t shard_begin_ = 0, shard_end_ = 0;
  double alpha_ = 0.0;
  DenseMatrix x0_cols_;  // q x n, row k = A_k^T trunc(y_k, alpha)
  DenseMatrix ut_;       // r x n, transposed current basis (begin_pass)
};

// ---------------------------------------------------------------------------
// LRPR
// ---------------------------------------------------------------------------

class LrprModel final : public ColumnModel {
 public:
  LrprModel(const LrprData& data, std::size_t r, const SolverConfig& cfg)
      : data_(data),
        r_(r),
        inner_iters_(cfg.lrpr_inner_iters),
        seed_(cfg.seed),
        z_cols_(data.z.transposed()) {
    if (r_ == 0 || r_ > std::min(data_.n, data_.q))
      throw BadRank("lrpr: need 1 <= r <= min(n,q)");
    ops_.reserve(data_.q);
    for (std::size_t k = 0; k < data_.q; ++k)
      ops_.push_back(data_.operator_matrix(k));
    if (cfg.sample_split)
      shards_ = sample_split_groups(data_.m, r_, cfg.t_max);
    else
      shards_ = {{0, static_cast<std::uint32_t>(data_.m)}};
    zt2_cols_ = DenseMatrix(data_.q, data_.m);
    warm_b_ = DenseMatrix(data_.q, r_);
    warm_valid_.assign(data_.q, 0);
    begin_iteration(0);
  }

  ProblemKind kind() const override { return ProblemKind::kLrpr; }
  std::size_t q() const override { return data_.q; }
  std::size_t n() const override { return data_.n; }
  std::size_t r() const override { return r_; }

  bool needs_alpha_round() const override { return true; }

  double column_energy(std::size_t k, flops::Counter& fc) const override {
    const auto [sb, se] = shards_[0];
    fc.add(flops::dot(se - sb));
    return kernels::nrm2sq(z_cols_.row(k) + sb, se - sb);
  }

  double alpha_samples() const override {
    return static_cast<double>(shards_[0].second - shards_[0].first);
  }

  void set_alpha(double alpha) override { alpha_ = alpha; }

  void prepare_init_column(std::size_t k, flops::Counter& fc) override {
    // Cache the squared truncated magnitudes; the init operator is the
    // magnitude-weighted covariance sum_k sum_i z_t(i)^2 a_ki a_ki^T.
    const auto [sb, se] = shards_[0];
    const std::size_t m0 = se - sb;
    const std::vector<double> trunc = truncate_vector(
        std::span<const double>(z_cols_.row(k) + sb, m0), alpha_);
    double* zt2 = zt2_cols_.row(k);
    for (std::size_t i = 0; i < m0; ++i) zt2[i] = trunc[i] * trunc[i];
    fc.add(m0);
  }

  void init_contribution(const DenseMatrix& u, std::size_t k,
                         InitContribution& out,
                         flops::Counter& fc) override {
    (void)u;
    // Full n x r block: A_k^T diag(zt^2) (A_k U), accumulated transposed so
    // the inner loops run over contiguous length-n rows.
    const auto [sb, se] = shards_[0];
    const std::size_t m0 = se - sb;
    const DenseMatrix& a = ops_[k];
    const DenseMatrix au = rows_times(a.row(sb), m0, data_.n, ut_);
    fc.add(flops::gemm(m0, data_.n, r_));
    const double* zt2 = zt2_cols_.row(k);
    DenseMatrix ct(r_, data_.n);
    for (std::size_t i = 0; i < m0; ++i) {
      const double* aui = au.row(i);
      for (std::size_t c = 0; c < r_; ++c)
        kernels::axpy(data_.n, zt2[i] * aui[c], a.row(sb + i), ct.row(c));
    }
    fc.add(flops::gemm(m0, data_.n, r_));
    out.rows = {};
    out.s.clear();
    out.w.resize(data_.n * r_);
    for (std::size_t i = 0; i < data_.n; ++i)
      for (std::size_t c = 0; c < r_; ++c) out.w[i * r_ + c] = ct(c, i);
  }

  OrthonormalBasis finalize_init(OrthonormalBasis u00,
                                 flops::Counter&) const override {
    return u00;
  }

  double sigma_from_init(double lambda_top, double sum_energy) const override {
    // E[M] ~ m (||X*||_F^2 I + 2 X* X*^T) up to truncation attenuation,
    // and sum_k ||z_k||^2 / m estimates ||X*||_F^2.
    const double m0 = alpha_samples();
    const double fro_sq = std::max(sum_energy / m0, 0.0);
    const double top = (std::max(lambda_top, 0.0) / m0 - fro_sq) / 2.0;
    return std::sqrt(std::max(top, fro_sq / static_cast<double>(r_)));
  }

  void begin_iteration(int t) override {
    const auto [sb, se] = shards_[sample_split_group_for(shards_.size(), t)];
    shard_begin_ = sb;
    shard_end_ = se;
  }

  double eta_denominator() const override {
    return static_cast<double>(shard_end_ - shard_begin_);
  }

  void begin_pass(const DenseMatrix& u) override { ut_ = u.transposed(); }

  void process_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                      std::vector<double>& w, double& objective,
                      ColumnStatus& status, flops::Counter& fc) override {
    (void)u;
    status = {};
    const std::size_t mt = shard_end_ - shard_begin_;
    const DenseMatrix& a = ops_[k];
    const DenseMatrix au = rows_times(a.row(shard_begin_), mt, data_.n, ut_);
    fc.add(flops::gemm(mt, data_.n, r_));
    const std::span<const double> zk(z_cols_.row(k) + shard_begin_, mt);

    std::vector<double> bk = warm_valid_[k]
                                 ? std::vector<double>(
                                       warm_b_.row(k), warm_b_.row(k) + r_)
                                 : spectral_column_start(au, zk, k, fc);

    // Alternate sign estimation and least squares; both half-steps are exact
    // minimizers, so the column objective never increases.
    std::vector<double> yhat(mt);
    for (int round = 0; round < inner_iters_; ++round) {
      const std::vector<double> aub = matvec(au, bk);
      fc.add(flops::gemv(mt, r_));
      for (std::size_t i = 0; i < mt; ++i)
        yhat[i] = sign_plus(aub[i]) * zk[i];
      bk = least_squares(au, yhat);
      fc.add(flops::least_squares(mt, r_));
    }
    std::copy(bk.begin(), bk.end(), b.begin());
    std::copy(bk.begin(), bk.end(), warm_b_.row(k));
    warm_valid_[k] = 1;

    std::vector<double> res = matvec(au, bk);
    fc.add(flops::gemv(mt, r_));
    for (std::size_t i = 0; i < mt; ++i) res[i] -= yhat[i];
    objective = kernels::nrm2sq(res.data(), mt);
    fc.add(flops::dot(mt));

    w.assign(data_.n, 0.0);
    for (std::size_t i = 0; i < mt; ++i)
      kernels::axpy(data_.n, res[i], a.row(shard_begin_ + i), w.data());
    fc.add(flops::gemv(mt, data_.n));
    fc.add(2ull * data_.n * r_);
  }

  std::span<const std::uint32_t> grad_rows(std::size_t) const override {
    return {};
  }

  void update_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                     ColumnStatus& status, flops::Counter& fc) override {
    std::vector<double> w;
    double obj;
    process_column(u, k, b, w, obj, status, fc);
  }

  void residual_terms(const DenseMatrix& u, std::span<const double> b,
                      std::size_t k, double* res_sq,
                      double* ref_sq) const override {
    const DenseMatrix& a = ops_[k];
    const std::vector<double> xhat = matvec(u, b);
    std::vector<double> ax = matvec(a, xhat);
    const double* zk = z_cols_.row(k);
    for (std::size_t i = 0; i < data_.m; ++i) ax[i] = std::abs(ax[i]) - zk[i];
    *res_sq = kernels::nrm2sq(ax.data(), data_.m);
    *ref_sq = kernels::nrm2sq(zk, data_.m);
  }

  void error_terms(const DenseMatrix& u, std::span<const double> b,
                   std::size_t k, const GroundTruth& gt, double* diff_sq,
                   double* ref_sq) const override {
    // Column error up to a global sign: min over +/- x_hat.
    const std::vector<double> xhat = matvec(u, b);
    const std::vector<double> xstar = gt.column(k);
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < xhat.size(); ++i) {
      const double dp = xhat[i] - xstar[i];
      const double dm = xhat[i] + xstar[i];
      plus += dp * dp;
      minus += dm * dm;
    }
    *diff_sq = std::min(plus, minus);
    *ref_sq = kernels::nrm2sq(xstar.data(), xstar.size());
  }

 private:
  std::vector<double> spectral_column_start(const DenseMatrix& au,
                                            std::span<const double> z,
                                            std::size_t k,
                                            flops::Counter& fc) const {
    // r-dimensional spectral start: top eigenvector of
    // S = sum_i z_i^2 (au_i)(au_i)^T, scaled to sqrt(mean z^2).
    const std::size_t mt = au.rows();
    DenseMatrix s(r_, r_);
    for (std::size_t i = 0; i < mt; ++i) {
      const double zi2 = z[i] * z[i];
      const double* row = au.row(i);
      for (std::size_t c1 = 0; c1 < r_; ++c1)
        for (std::size_t c2 = 0; c2 < r_; ++c2)
          s(c1, c2) += zi2 * row[c1] * row[c2];
    }
    fc.add(2ull * mt * r_ * r_);
    Rng rng(derive_seed(seed_, kLrprWarmStream, k));
    std::vector<double> v(r_);
    for (double& x : v) x = rng.next_gaussian();
    for (int it = 0; it < 30; ++it) {
      std::vector<double> sv = matvec(s, v);
      const double norm = vec_norm(sv);
      if (!(norm > 0.0)) break;
      for (std::size_t i = 0; i < r_; ++i) v[i] = sv[i] / norm;
    }
    fc.add(30ull * 2 * r_ * r_);
    const double scale =
        std::sqrt(kernels::nrm2sq(z.data(), mt) / static_cast<double>(mt));
    for (double& x : v) x *= scale;
    return v;
  }

  const LrprData& data_;
  std::size_t r_;
  int inner_iters_;
  std::uint64_t seed_;
  DenseMatrix z_cols_;  // q x m
  std::vector<DenseMatrix> ops_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shards_;
  std::uint32_t shard_begin_ = 0, shard_end_ = 0;
  double alpha_ = 0.0;
  DenseMatrix zt2_cols_;  // q x m, squared truncated magnitudes (init shard)
  DenseMatrix warm_b_;    // q x r
  std::vector<char> warm_valid_;
  DenseMatrix ut_;        // r x n, transposed current basis (begin_pass)
};

// ---------------------------------------------------------------------------
// LRMC
// ---------------------------------------------------------------------------

class LrmcModel final : public ColumnModel {
 public:
  LrmcModel(const LrmcData& data, std::size_t r, const SolverConfig& cfg,
            double mu)
      : data_(data), r_(r), mu_(mu) {
    if (r_ == 0 || r_ > std::min(data_.n, data_.q))
      throw BadRank("lrmc: need 1 <= r <= min(n,q)");
    if (cfg.sample_split) {
      const std::size_t expected =
          static_cast<std::size_t>(data_.p * static_cast<double>(data_.n));
      num_groups_ = sample_split_groups(expected, r_, cfg.t_max).size();
    }
    shard_rows_.resize(data_.q);
    shard_vals_.resize(data_.q);
    begin_iteration(0);
  }

  ProblemKind kind() const override { return ProblemKind::kLrmc; }
  std::size_t q() const override { return data_.q; }
  std::size_t n() const override { return data_.n; }
  std::size_t r() const override { return r_; }

  bool needs_alpha_round() const override { return false; }
  double column_energy(std::size_t, flops::Counter&) const override {
    return 0.0;
  }
  double alpha_samples() const override { return 0.0; }
  void set_alpha(double) override {}

  void prepare_init_column(std::size_t k, flops::Counter&) override {
    // Init vector is the shard-0 slice of the zero-filled column of Y.
    fill_shard(k, 0);
  }

  void init_contribution(const DenseMatrix& u, std::size_t k,
                         InitContribution& out,
                         flops::Counter& fc) override {
    // (Y/p)(Y/p)^T U = sum_k y_k (y_k^T U) / p^2, sparse in the rows of y_k.
    const auto& rows = shard_rows_[k];
    const auto& vals = shard_vals_[k];
    const double pg = effective_p();
    const double scale = 1.0 / (pg * pg);
    out.rows = {rows.data(), rows.size()};
    out.w.assign(vals.begin(), vals.end());
    out.s.assign(r_, 0.0);
    for (std::size_t t = 0; t < rows.size(); ++t)
      kernels::axpy(r_, vals[t], u.row(rows[t]), out.s.data());
    for (double& x : out.s) x *= scale;
    fc.add(flops::gemv(rows.size(), r_));
    fc.add(2ull * rows.size() * r_);
  }

  OrthonormalBasis finalize_init(OrthonormalBasis u00,
                                 flops::Counter& fc) const override {
    const DenseMatrix projected = project_row_incoherent(u00.matrix(), mu_);
    fc.add(3ull * data_.n * r_);
    QrFactors f = orthonormalize_qr(projected);
    fc.add(flops::qr(data_.n, r_));
    return std::move(f.q);
  }

  double sigma_from_init(double lambda_top, double) const override {
    return std::sqrt(std::max(lambda_top, 0.0));
  }

  void begin_iteration(int t) override {
    const std::size_t g = sample_split_group_for(num_groups_, t);
    if (t == 0 || g != group_ || !shards_ready_) {
      group_ = g;
      for (std::size_t k = 0; k < data_.q; ++k) fill_shard(k, group_);
      shards_ready_ = true;
    }
  }

  double eta_denominator() const override { return effective_p(); }

  void process_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                      std::vector<double>& w, double& objective,
                      ColumnStatus& status, flops::Counter& fc) override {
    status = {};
    const auto& rows = shard_rows_[k];
    const auto& vals = shard_vals_[k];
    const std::size_t cnt = rows.size();
    std::fill(b.begin(), b.end(), 0.0);
    w.clear();
    objective = 0.0;
    if (cnt < r_) {
      // Underdetermined column: zero-and-flag, run continues.
      status.underdetermined = true;
      objective = kernels::nrm2sq(vals.data(), cnt);
      return;
    }
    DenseMatrix u_rows(cnt, r_);
    for (std::size_t t = 0; t < cnt; ++t)
      std::copy(u.row(rows[t]), u.row(rows[t]) + r_, u_rows.row(t));
    std::vector<double> bk;
    try {
      bk = least_squares(u_rows, vals);
      fc.add(flops::least_squares(cnt, r_));
    } catch (const RankDeficient&) {
      status.underdetermined = true;
      objective = kernels::nrm2sq(vals.data(), cnt);
      return;
    }
    std::copy(bk.begin(), bk.end(), b.begin());
    w = matvec(u_rows, bk);
    fc.add(flops::gemv(cnt, r_));
    for (std::size_t t = 0; t < cnt; ++t) w[t] -= vals[t];
    objective = kernels::nrm2sq(w.data(), cnt);
    fc.add(flops::dot(cnt));
    fc.add(2ull * cnt * r_);
  }

  std::span<const std::uint32_t> grad_rows(std::size_t k) const override {
    return {shard_rows_[k].data(), shard_rows_[k].size()};
  }

  void update_column(const DenseMatrix& u, std::size_t k, std::span<double> b,
                     ColumnStatus& status, flops::Counter& fc) override {
    std::vector<double> w;
    double obj;
    process_column(u, k, b, w, obj, status, fc);
  }

  void residual_terms(const DenseMatrix& u, std::span<const double> b,
                      std::size_t k, double* res_sq,
                      double* ref_sq) const override {
    const auto rows = data_.rows_of(k);
    const auto vals = data_.values_of(k);
    double res = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const double xhat = kernels::dot(u.row(rows[t]), b.data(), r_);
      const double d = xhat - vals[t];
      res += d * d;
    }
    *res_sq = res;
    *ref_sq = kernels::nrm2sq(vals.data(), vals.size());
  }

  void error_terms(const DenseMatrix& u, std::span<const double> b,
                   std::size_t k, const GroundTruth& gt, double* diff_sq,
                   double* ref_sq) const override {
    std::vector<double> xhat = matvec(u, b);
    const std::vector<double> xstar = gt.column(k);
    for (std::size_t i = 0; i < xhat.size(); ++i) xhat[i] -= xstar[i];
    *diff_sq = kernels::nrm2sq(xhat.data(), xhat.size());
    *ref_sq = kernels::nrm2sq(xstar.data(), xstar.size());
  }

 private:
  double effective_p() const {
    return data_.p / static_cast<double>(num_groups_);
  }

  void fill_shard(std::size_t k, std::size_t g) {
    const auto rows = data_.rows_of(k);
    const auto vals = data_.values_of(k);
    auto& sr = shard_rows_[k];
    auto& sv = shard_vals_[k];
    sr.clear();
    sv.clear();
    if (num_groups_ <= 1) {
      sr.assign(rows.begin(), rows.end());
      sv.assign(vals.begin(), vals.end());
      return;
    }
    for (std::size_t t = g; t < rows.size(); t += num_groups_) {
      sr.push_back(rows[t]);
      sv.push_back(vals[t]);
    }
  }

  const LrmcData& data_;
  std::size_t r_;
  double mu_;
  std::size_t num_groups_ = 1;
  std::size_t group_ = 0;
  bool shards_ready_ = false;
  std::vector<std::vector<std::uint32_t>> shard_rows_;
  std::vector<std::vector<double>> shard_vals_;
};

std::unique_ptr<ColumnModel> make_lrcs_model(const LrcsData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg) {
  return std::make_unique<LrcsModel>(data, r, cfg);
}

std::unique_ptr<ColumnModel> make_lrpr_model(const LrprData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg) {
  return std::make_unique<LrprModel>(data, r, cfg);
}

std::unique_ptr<ColumnModel> make_lrmc_model(const LrmcData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg,
                                             double mu) {
  return std::make_unique<LrmcModel>(data, r, cfg, mu);
}

}  // namespace altgdmin

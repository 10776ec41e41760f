#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "altgdmin/core/exact_sum.hpp"
#include "altgdmin/core/matrix.hpp"
#include "altgdmin/problems/ground_truth.hpp"
#include "altgdmin/problems/measure.hpp"
#include "altgdmin/solvers/config.hpp"
#include "altgdmin/solvers/flops.hpp"

namespace altgdmin {

struct ColumnStatus {
  bool underdetermined = false;
};

/// Column-wise problem adapter consumed by the iteration driver. All methods
/// are column-local: calling them for column k touches only column-k data,
/// which is what makes the centralized solver and the federation simulator
/// bit-identical once cross-column sums go through the exact reducers.
///
/// Threading contract: process_column/update_column/prepare_init_column may
/// be called concurrently for distinct k.
class ColumnModel {
 public:
  virtual ~ColumnModel() = default;

  virtual ProblemKind kind() const = 0;
  virtual std::size_t q() const = 0;
  virtual std::size_t n() const = 0;
  virtual std::size_t r() const = 0;

  // ---- spectral initialization ----

  /// LRCS/LRPR need the truncation-threshold round; LRMC does not.
  virtual bool needs_alpha_round() const = 0;

  /// ||y_k||^2 (or ||z_k||^2) over the init shard.
  virtual double column_energy(std::size_t k, flops::Counter& fc) const = 0;

  /// Number of samples per column in the init shard (the m_0 in
  /// alpha = C~ * sum_k ||y_k||^2 / (m_0 q)).
  virtual double alpha_samples() const = 0;

  virtual void set_alpha(double alpha) = 0;

  /// Builds the column's cached init artifacts (e.g. x0_k = A_k^T trunc(y_k)).
  virtual void prepare_init_column(std::size_t k, flops::Counter& fc) = 0;

  /// Column k's contribution to the init operator applied to U. Rank-1
  /// contributions fill w (left factor, support `rows`, dense when empty)
  /// and s (right factor); operators without rank-1 column structure leave
  /// s empty and put the full n x r row-major block in w.
  struct InitContribution {
    std::vector<double> w;
    std::vector<double> s;
    std::span<const std::uint32_t> rows;
  };
  virtual void init_contribution(const DenseMatrix& u, std::size_t k,
                                 InitContribution& out,
                                 flops::Counter& fc) = 0;

  /// Post-processing of the power-method basis (LRMC: row-incoherence
  /// projection + QR; others: passthrough).
  virtual OrthonormalBasis finalize_init(OrthonormalBasis u00,
                                         flops::Counter& fc) const = 0;

  /// sigma*_max estimate from the init artifacts (policy kFromInit).
  virtual double sigma_from_init(double lambda_top,
                                 double sum_energy) const = 0;

  // ---- iteration ----

  /// Selects the sample-split shard for iteration t (t = 0 is the init).
  virtual void begin_iteration(int t) = 0;

  /// Called once before a batch of per-column calls with the current basis;
  /// models may cache derived layouts (e.g. the transposed basis). Must be
  /// called single-threaded.
  virtual void begin_pass(const DenseMatrix& u) { (void)u; }

  /// Step size denominator without the sigma^2 factor: samples-per-column of
  /// the active shard (LRCS/LRPR) or the effective observation probability
  /// (LRMC).
  virtual double eta_denominator() const = 0;

  /// Exact minimization over column k at fixed U, plus the gradient carrier
  /// and the objective term, sharing intermediates:
  ///   gradient contribution of column k = w * b^T (rows grad_rows(k)).
  virtual void process_column(const DenseMatrix& u, std::size_t k,
                              std::span<double> b, std::vector<double>& w,
                              double& objective, ColumnStatus& status,
                              flops::Counter& fc) = 0;

  /// Row support of the last gradient carrier for k (empty span = dense).
  virtual std::span<const std::uint32_t> grad_rows(std::size_t k) const = 0;

  /// Minimization only (final refresh).
  virtual void update_column(const DenseMatrix& u, std::size_t k,
                             std::span<double> b, ColumnStatus& status,
                             flops::Counter& fc) = 0;

  // ---- metrics (not flop-counted; oracle-free residual uses full data) ----

  virtual void residual_terms(const DenseMatrix& u, std::span<const double> b,
                              std::size_t k, double* res_sq,
                              double* ref_sq) const = 0;

  /// Squared column error vs ground truth (phase-invariant for LRPR).
  virtual void error_terms(const DenseMatrix& u, std::span<const double> b,
                           std::size_t k, const GroundTruth& gt,
                           double* diff_sq, double* ref_sq) const = 0;
};

std::unique_ptr<ColumnModel> make_lrcs_model(const LrcsData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg);
std::unique_ptr<ColumnModel> make_lrpr_model(const LrprData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg);
std::unique_ptr<ColumnModel> make_lrmc_model(const LrmcData& data,
                                             std::size_t r,
                                             const SolverConfig& cfg,
                                             double mu);

/// Contiguous row groups for sample splitting: the first group feeds the
/// initialization, iteration t cycles through the rest. Groups are disjoint
/// and cover [0, count) exactly.
std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_split_groups(
    std::size_t count, std::size_t r, int t_max);

/// Group index for iteration t (t = 0 -> init group 0).
std::size_t sample_split_group_for(std::size_t num_groups, int t);

}  // namespace altgdmin

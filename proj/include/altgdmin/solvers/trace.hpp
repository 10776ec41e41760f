#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin {

inline constexpr double kTraceNaN = std::numeric_limits<double>::quiet_NaN();

/// One row per completed iteration; row 0 describes the initialization.
/// Oracle-dependent fields are NaN when no ground truth was supplied.
struct TraceRecord {
  int iter = 0;
  double se2 = kTraceNaN;          // SE2(U_t, U*)
  double sef = kTraceNaN;          // SEF(U_t, U*)
  double max_col_err = kTraceNaN;  // max_k ||x_k - x*_k|| / ||x*_k||
  double objective = kTraceNaN;    // f at the minimization half-step
  std::uint64_t flops = 0;         // cumulative
  double seconds = 0.0;            // cumulative wall time (in-memory only)
  int underdetermined_cols = 0;    // flagged-and-zeroed columns this iteration
};

/// End-of-run summary metrics, computed after the final B refresh.
struct FinalStats {
  double objective = kTraceNaN;
  double residual = kTraceNaN;      // oracle-free, problem-specific:
                                    // lrcs: max_k ||y_k - A_k x_k|| / ||y_k||
                                    // lrpr: max_k ||z_k - |A_k x_k||| / ||z_k||
                                    // lrmc: ||(X - Y)_Omega||_F / ||Y||_F
  double max_col_err = kTraceNaN;   // oracle
  double rel_fro_err = kTraceNaN;   // oracle: ||X - X*||_F / ||X*||_F
  double se2 = kTraceNaN;
  double sef = kTraceNaN;
};

struct RunTrace {
  std::vector<TraceRecord> records;

  // Initialization artifacts.
  double init_se2 = kTraceNaN;
  double alpha = kTraceNaN;  // LRCS/LRPR truncation threshold
  int power_iters = 0;
  double sigma_estimate = kTraceNaN;
  double init_lambda_top = kTraceNaN;  // top eigenvalue of the init operator
  double init_sum_energy = kTraceNaN;  // sum_k ||y_k||^2 over the init shard

  FinalStats final_stats;
  std::vector<std::uint32_t> flagged_columns;  // union over iterations
  bool stopped_by_tol = false;

  /// Completed gradient iterations (excludes the init row).
  int iterations() const {
    return records.empty() ? 0 : records.back().iter;
  }

  std::uint64_t total_flops() const {
    return records.empty() ? 0 : records.back().flops;
  }

  double total_seconds() const {
    return records.empty() ? 0.0 : records.back().seconds;
  }

  /// CSV with header `iter,se2,sef,max_col_err,objective,flops,seconds`.
  /// The seconds column is written as 0 so that re-runs are byte-identical;
  /// wall time stays in-memory (total_seconds()).
  std::string to_csv() const;
};

struct FactorEstimate {
  OrthonormalBasis u;  // n x r
  DenseMatrix b;       // r x q (empty in federated runs unless assembled)
};

// Export layout: <prefix>.U.mat and <prefix>.B.mat in the binary matrix
// format plus <prefix>.json with the shape metadata.
void save_factor_estimate(const std::string& prefix, const FactorEstimate& e);
FactorEstimate load_factor_estimate(const std::string& prefix);

struct SolveResult {
  FactorEstimate estimate;
  RunTrace trace;
};

}  // namespace altgdmin

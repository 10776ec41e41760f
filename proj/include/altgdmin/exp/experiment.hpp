#pragma once

#include <optional>
#include <string>
#include <vector>

#include "altgdmin/fed/topology.hpp"
#include "altgdmin/solvers/config.hpp"
#include "altgdmin/solvers/trace.hpp"

namespace altgdmin {

enum class SolverChoice { kAltgdmin, kAltmin };

struct TopologySpec {
  std::size_t gamma = 1;
  PartitionPolicy policy = PartitionPolicy::kContiguous;
};

/// One experiment: a synthetic instance plus solver settings, optionally a
/// federation topology and sweep/compare axes. Parsed from a JSON config
/// with a versioned schema.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kLrcs;
  std::size_t n = 0, q = 0, r = 0;
  double kappa = 1.0;
  std::size_t m = 0;  // lrcs / lrpr
  double p = 0.0;     // lrmc
  SolverChoice solver = SolverChoice::kAltgdmin;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  SolverConfig solver_config;
  std::optional<TopologySpec> topology;

  // sweep axes (empty = not swept)
  std::vector<std::size_t> sweep_m;
  std::vector<double> sweep_p;
  std::vector<double> sweep_c_eta;
  std::vector<std::uint64_t> sweep_seeds;

  // compare verb
  std::vector<SolverChoice> compare_solvers;

  void validate() const;  // throws ConfigError
};

ExperimentConfig load_experiment_config(const std::string& path);

/// Success threshold used for phase-transition sweeps and summaries.
inline constexpr double kSuccessThreshold = 1e-6;

struct ExperimentOutcome {
  RunTrace trace;
  FactorEstimate estimate;
  bool federated = false;
  std::uint64_t message_bytes = 0;
  std::uint64_t message_elements = 0;
  /// Problem-level error: max column error (LRCS/LRPR, phase-invariant) or
  /// relative Frobenius error (LRMC), against the planted matrix.
  double final_error = 0.0;
  bool success = false;
  std::string error;  // empty on success; solver failure message otherwise
};

/// Runs one experiment and writes trace.csv, summary.json and (when
/// federated) messages.csv into out_dir. Returns the outcome; solver errors
/// are captured in it (and in summary.json) rather than thrown. Config
/// errors throw ConfigError.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::string& out_dir);

/// In-memory variant used by sweeps and tests (no files written).
ExperimentOutcome run_experiment_in_memory(const ExperimentConfig& cfg);

struct SweepCell {
  std::size_t m = 0;
  double p = 0.0;
  double c_eta = 0.0;
  std::uint64_t seed = 0;
  double final_error = 0.0;
  int iterations = 0;
  bool success = false;
  std::uint64_t flops = 0;
  std::uint64_t bytes = 0;
  std::string status;  // "ok" or the error type
};

struct SweepResult {
  std::vector<SweepCell> cells;  // sorted by (m, p, c_eta, seed)
  std::string csv() const;
};

/// Cartesian sweep over the configured axes (guarded to <= 10^4 cells).
/// Failed cells are recorded and the sweep continues. Writes sweep.csv.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& out_dir);

struct CompareRow {
  std::string solver;
  std::uint64_t seed = 0;
  int iterations = 0;
  double final_error = 0.0;
  std::uint64_t flops = 0;
  std::uint64_t bytes = 0;
  double per_round_comm_elements = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;  // paired by seed, solver order as configured
  std::string csv() const;
};

/// Paired-by-seed solver comparison on identical datasets. Writes
/// comparison.csv.
CompareResult run_compare(const ExperimentConfig& cfg,
                          const std::string& out_dir);

/// Prints a short human summary of a trace.csv; throws IoError on malformed
/// input.
std::string inspect_trace(const std::string& trace_csv_path);

}  // namespace altgdmin

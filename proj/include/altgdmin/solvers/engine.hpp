#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "altgdmin/fed/message_log.hpp"
#include "altgdmin/fed/topology.hpp"
#include "altgdmin/solvers/models.hpp"
#include "altgdmin/solvers/trace.hpp"

namespace altgdmin {

/// How cross-column sums are grouped. A single group with no log is the
/// centralized solver; gamma groups with a log is the federation simulator.
/// Because every cross-column reduction is exact, the grouping never changes
/// the produced bits, which is the equivalence the simulator certifies.
struct AggregationPlan {
  std::vector<std::vector<std::uint32_t>> groups;
  MessageLog* log = nullptr;

  static AggregationPlan centralized(std::size_t q);
  static AggregationPlan federated(const FederationTopology& topo,
                                   MessageLog* log);
};

/// Alternating minimization-over-B / projected-GD-over-U driver.
class AltgdminDriver {
 public:
  AltgdminDriver(ColumnModel& model, const SolverConfig& cfg,
                 const GroundTruth* oracle, AggregationPlan plan);
  ~AltgdminDriver();

  /// Spectral initialization (threshold round + power method + projection).
  void initialize();

  /// One round: column minimization, gradient aggregation, GD step, QR.
  /// Returns false once the stopping rule or the iteration cap was hit.
  bool step();

  /// Runs initialize + rounds to completion.
  void run();

  /// Final B refresh and result assembly. When `assemble_b` is false the
  /// returned estimate carries an empty B (federated runs keep B sharded;
  /// assembly is a test-mode concession).
  SolveResult finish(bool assemble_b);

  const OrthonormalBasis& basis() const;
  int iteration() const;
  const RunTrace& trace() const;

  /// Test hook invoked with every iterate U_t (t = 0 is the init).
  std::function<void(int, const OrthonormalBasis&)> on_iterate;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---- solver entry points ----

SolveResult altgdmin_lrcs(const LrcsData& data, std::size_t r,
                          const SolverConfig& cfg,
                          const GroundTruth* oracle = nullptr);
SolveResult altgdmin_lrpr(const LrprData& data, std::size_t r,
                          const SolverConfig& cfg,
                          const GroundTruth* oracle = nullptr);
SolveResult altgdmin_lrmc(const LrmcData& data, std::size_t r,
                          const SolverConfig& cfg,
                          const GroundTruth* oracle = nullptr);

// ---- spectral initialization, exposed standalone ----

struct LrcsInitResult {
  OrthonormalBasis u0;
  double alpha = 0.0;
  int power_iters = 0;
  double lambda_top = 0.0;  // top eigenvalue estimate of the init operator
  double sum_energy = 0.0;  // sum_k ||y_k||^2
};

/// c_tilde is the truncation constant (9 kappa^2 mu^2 when metadata is known).
LrcsInitResult lrcs_init(const LrcsData& data, std::size_t r, double c_tilde);
LrcsInitResult lrpr_init(const LrprData& data, std::size_t r, double c_tilde);
OrthonormalBasis lrmc_init(const LrmcData& data, std::size_t r, double mu);

/// sigma*_max estimate from initialization artifacts. `lambda_top` is the top
/// eigenvalue of the init operator, `sum_energy`/`samples` as produced by the
/// init. For LRMC pass lambda_top of (Y/p)(Y/p)^T.
double estimate_sigma_max(ProblemKind kind, double lambda_top,
                          double sum_energy, double samples, std::size_t r);

/// 9 kappa^2 mu^2 when an oracle is present, else the configured override,
/// else the conservative default.
double resolve_c_tilde(const SolverConfig& cfg, const GroundTruth* oracle);
double resolve_mu(const SolverConfig& cfg, const GroundTruth* oracle);

}  // namespace altgdmin

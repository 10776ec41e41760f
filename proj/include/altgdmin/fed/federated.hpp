#pragma once

#include <memory>
#include <variant>

#include "altgdmin/fed/message_log.hpp"
#include "altgdmin/fed/topology.hpp"
#include "altgdmin/solvers/engine.hpp"

namespace altgdmin {

struct FederatedResult {
  FactorEstimate estimate;  // B empty unless assemble_b was requested
  RunTrace trace;
  MessageLog log;
};

/// Deterministic in-process simulation of the vertical-federated solver:
/// nodes hold column shards, update their B columns locally and ship only
/// n*r partial-gradient (or power-iterate) summaries; the center merges the
/// exact partial accumulators, takes the GD step and QRs. Because the
/// aggregation is exact, the produced iterates are bit-identical to the
/// centralized solver for every gamma and thread count.
///
/// Node state in this simulation: node l's local columns are
/// topology.shards[l]; its B shard is the corresponding rows of the
/// driver's coefficient slab (only ever written by column-local work); its
/// partial-gradient scratch is the per-node exact accumulator the center
/// merges. Nothing column-local ever enters a message payload, which the
/// log's payload-kind whitelist makes checkable.
class FederatedSolver {
 public:
  FederatedSolver(const LrcsData& data, std::size_t r, const SolverConfig& cfg,
                  const FederationTopology& topo,
                  const GroundTruth* oracle = nullptr);
  FederatedSolver(const LrprData& data, std::size_t r, const SolverConfig& cfg,
                  const FederationTopology& topo,
                  const GroundTruth* oracle = nullptr);
  FederatedSolver(const LrmcData& data, std::size_t r, const SolverConfig& cfg,
                  const FederationTopology& topo,
                  const GroundTruth* oracle = nullptr);
  ~FederatedSolver();

  /// Spectral initialization (threshold round when applicable + federated
  /// power method).
  void initialize();

  /// One federated AltGDmin round; false when stopping criterion was hit.
  bool round();

  /// assemble_b gathers the node-local B columns into the result; test-mode
  /// only, a real deployment would keep them sharded for privacy.
  FederatedResult finish(bool assemble_b = false);

  const OrthonormalBasis& basis() const;
  const MessageLog& log() const;
  int iteration() const;

  AltgdminDriver& driver();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FederatedResult run_federated(const LrcsData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle = nullptr,
                              bool assemble_b = false);
FederatedResult run_federated(const LrprData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle = nullptr,
                              bool assemble_b = false);
FederatedResult run_federated(const LrmcData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle = nullptr,
                              bool assemble_b = false);

}  // namespace altgdmin

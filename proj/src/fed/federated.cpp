#include "altgdmin/fed/federated.hpp"

#include "altgdmin/errors.hpp"
#include "altgdmin/solvers/models.hpp"

namespace altgdmin {

struct FederatedSolver::Impl {
  std::unique_ptr<ColumnModel> model;
  MessageLog log;
  std::unique_ptr<AltgdminDriver> driver;

  Impl(std::unique_ptr<ColumnModel> m, const SolverConfig& cfg,
       const FederationTopology& topo, const GroundTruth* oracle)
      : model(std::move(m)) {
    if (topo.num_columns() != model->q())
      throw BadGamma("topology does not cover the data columns");
    driver = std::make_unique<AltgdminDriver>(
        *model, cfg, oracle, AggregationPlan::federated(topo, &log));
  }
};

FederatedSolver::FederatedSolver(const LrcsData& data, std::size_t r,
                                 const SolverConfig& cfg,
                                 const FederationTopology& topo,
                                 const GroundTruth* oracle)
    : impl_(std::make_unique<Impl>(make_lrcs_model(data, r, cfg), cfg, topo,
                                   oracle)) {}

FederatedSolver::FederatedSolver(const LrprData& data, std::size_t r,
                                 const SolverConfig& cfg,
                                 const FederationTopology& topo,
                                 const GroundTruth* oracle)
    : impl_(std::make_unique<Impl>(make_lrpr_model(data, r, cfg), cfg, topo,
                                   oracle)) {}

FederatedSolver::FederatedSolver(const LrmcData& data, std::size_t r,
                                 const SolverConfig& cfg,
                                 const FederationTopology& topo,
                                 const GroundTruth* oracle)
    : impl_(std::make_unique<Impl>(
          make_lrmc_model(data, r, cfg, resolve_mu(cfg, oracle)), cfg, topo,
          oracle)) {}

FederatedSolver::~FederatedSolver() = default;

void FederatedSolver::initialize() { impl_->driver->initialize(); }
bool FederatedSolver::round() { return impl_->driver->step(); }

FederatedResult FederatedSolver::finish(bool assemble_b) {
  SolveResult res = impl_->driver->finish(assemble_b);
  FederatedResult out;
  out.estimate = std::move(res.estimate);
  out.trace = std::move(res.trace);
  out.log = impl_->log;
  return out;
}

const OrthonormalBasis& FederatedSolver::basis() const {
  return impl_->driver->basis();
}
const MessageLog& FederatedSolver::log() const { return impl_->log; }
int FederatedSolver::iteration() const { return impl_->driver->iteration(); }
AltgdminDriver& FederatedSolver::driver() { return *impl_->driver; }

namespace {

template <typename Data>
FederatedResult run_impl(const Data& data, std::size_t r,
                         const SolverConfig& cfg,
                         const FederationTopology& topo,
                         const GroundTruth* oracle, bool assemble_b) {
  FederatedSolver solver(data, r, cfg, topo, oracle);
  solver.initialize();
  while (solver.round()) {
  }
  return solver.finish(assemble_b);
}

}  // namespace

FederatedResult run_federated(const LrcsData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle, bool assemble_b) {
  return run_impl(data, r, cfg, topo, oracle, assemble_b);
}

FederatedResult run_federated(const LrprData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle, bool assemble_b) {
  return run_impl(data, r, cfg, topo, oracle, assemble_b);
}

FederatedResult run_federated(const LrmcData& data, std::size_t r,
                              const SolverConfig& cfg,
                              const FederationTopology& topo,
                              const GroundTruth* oracle, bool assemble_b) {
  return run_impl(data, r, cfg, topo, oracle, assemble_b);
}

}  // namespace altgdmin

#include "altgdmin/solvers/engine.hpp"

#include <chrono>
#include <cmath>

#include "altgdmin/core/linalg.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/kernels/kernels.hpp"
#include "altgdmin/util/parallel.hpp"

namespace altgdmin {

namespace {

constexpr std::uint64_t kPowerStartStream = 0x506F77u;

double clock_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

AggregationPlan AggregationPlan::centralized(std::size_t q) {
  AggregationPlan plan;
  plan.groups.emplace_back();
  plan.groups.front().reserve(q);
  for (std::size_t k = 0; k < q; ++k)
    plan.groups.front().push_back(static_cast<std::uint32_t>(k));
  return plan;
}

AggregationPlan AggregationPlan::federated(const FederationTopology& topo,
                                           MessageLog* log) {
  AggregationPlan plan;
  plan.groups = topo.shards;
  plan.log = log;
  return plan;
}

struct AltgdminDriver::Impl {
  ColumnModel& model;
  SolverConfig cfg;
  const GroundTruth* oracle;
  AggregationPlan plan;

  std::size_t q, n, r;
  int threads;

  OrthonormalBasis u;
  DenseMatrix bt;  // q x r, row k = b_k (columns stay with their shard's node)
  std::vector<std::vector<double>> w_slab;
  std::vector<double> obj_slab;
  std::vector<ColumnStatus> status_slab;

  flops::Counter flops_total;
  RunTrace trace;
  int t = 0;
  int rounds_logged = 0;  // message-log round counter
  bool initialized = false;
  bool done = false;
  double eta_sigma_sq = 0.0;
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();

  std::function<void(int, const OrthonormalBasis&)>* hook = nullptr;

  Impl(ColumnModel& m, const SolverConfig& c, const GroundTruth* o,
       AggregationPlan p)
      : model(m), cfg(c), oracle(o), plan(std::move(p)) {
    cfg.validate();
    q = model.q();
    n = model.n();
    r = model.r();
    threads = effective_threads(cfg.threads);
    std::size_t covered = 0;
    for (const auto& g : plan.groups) covered += g.size();
    if (covered != q)
      throw BadGamma("aggregation plan does not cover all columns");
    bt = DenseMatrix(q, r);
    w_slab.resize(q);
    obj_slab.assign(q, 0.0);
    status_slab.assign(q, {});
  }

  void log_msg(MessageDirection dir, int node, PayloadKind kind,
               std::uint64_t elements) {
    if (plan.log) plan.log->record(rounds_logged, dir, node, kind, elements);
  }

  // Per-column work fanned out over threads; flop counters merged exactly.
  template <typename Fn>
  void for_all_columns(Fn&& fn) {
    std::vector<flops::Counter> counters(
        std::max<std::size_t>(1, static_cast<std::size_t>(threads)));
    if (threads <= 1) {
      for (std::size_t k = 0; k < q; ++k) fn(k, counters[0]);
    } else {
      const std::size_t workers = counters.size();
      const std::size_t chunk = (q + workers - 1) / workers;
      parallel_for(workers, threads, [&](std::size_t w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(q, begin + chunk);
        for (std::size_t k = begin; k < end; ++k) fn(k, counters[w]);
      });
    }
    for (const auto& c : counters) flops_total.merge(c);
  }

  double reduce_scalar_by_groups(const std::vector<double>& values,
                                 PayloadKind kind) {
    ExactAccumulator center;
    for (std::size_t node = 0; node < plan.groups.size(); ++node) {
      ExactAccumulator local;
      for (const std::uint32_t k : plan.groups[node]) local.add(values[k]);
      log_msg(MessageDirection::kUp, static_cast<int>(node), kind, 1);
      center.merge(local);
    }
    return center.round();
  }

  /// Gradient (or power-iterate) aggregation: per-node exact partial grids
  /// merged at the center, rounded once. Grouping-invariant by exactness.
  void reduce_grid_by_groups(DenseMatrix& out, PayloadKind kind,
                             bool sparse_rows) {
    ExactMatrixAccumulator center(n, r);
    ExactMatrixAccumulator local(n, r);
    for (std::size_t node = 0; node < plan.groups.size(); ++node) {
      local.reset();
      for (const std::uint32_t k : plan.groups[node]) {
        const auto& w = w_slab[k];
        if (w.empty()) continue;  // flagged column, zero contribution
        const std::span<const double> b(bt.row(k), r);
        if (sparse_rows) {
          local.add_outer_rows(model.grad_rows(k), w, b);
        } else {
          local.add_outer(w, b);
        }
      }
      log_msg(MessageDirection::kUp, static_cast<int>(node), kind,
              static_cast<std::uint64_t>(n) * r);
      center.merge(local);
    }
    center.round_into(out);
  }

  void broadcast_basis(PayloadKind kind) {
    for (std::size_t node = 0; node < plan.groups.size(); ++node)
      log_msg(MessageDirection::kDown, static_cast<int>(node), kind,
              static_cast<std::uint64_t>(n) * r);
  }

  void initialize() {
    model.begin_iteration(0);

    // Threshold round (LRCS/LRPR): per-node energy partials up, alpha down.
    double sum_energy = 0.0;
    if (model.needs_alpha_round()) {
      std::vector<double> energy(q, 0.0);
      for_all_columns([&](std::size_t k, flops::Counter& fc) {
        energy[k] = model.column_energy(k, fc);
      });
      sum_energy = reduce_scalar_by_groups(energy, PayloadKind::kScalarStat);
      if (!(sum_energy > 0.0))
        throw AllZeroData("spectral init: all measurements are zero");
      const double c_tilde = resolve_c_tilde(cfg, oracle);
      trace.alpha = c_tilde * sum_energy /
                    (model.alpha_samples() * static_cast<double>(q));
      for (std::size_t node = 0; node < plan.groups.size(); ++node)
        log_msg(MessageDirection::kDown, static_cast<int>(node),
                PayloadKind::kScalarStat, 1);
      model.set_alpha(trace.alpha);
      ++rounds_logged;
    }
    for_all_columns([&](std::size_t k, flops::Counter& fc) {
      model.prepare_init_column(k, fc);
    });

    // Power method on the init gram operator, one up/down pair per node per
    // iteration.
    OrthonormalBasis basis =
        orthonormalize_qr(
            gaussian_matrix(derive_seed(cfg.seed, kPowerStartStream), n, r))
            .q;
    flops_total.add(flops::qr(n, r));
    const int budget = default_power_iters(std::max(n, q));
    double lambda_top = 0.0;
    DenseMatrix applied(n, r);
    DenseMatrix full_block(n, r);
    std::vector<ColumnModel::InitContribution> contrib(q);
    for (int p = 1; p <= budget; ++p) {
      broadcast_basis(PayloadKind::kBasisBroadcast);
      const DenseMatrix& um = basis.matrix();
      model.begin_pass(um);
      for_all_columns([&](std::size_t k, flops::Counter& fc) {
        model.init_contribution(um, k, contrib[k], fc);
      });
      ExactMatrixAccumulator center(n, r);
      ExactMatrixAccumulator local(n, r);
      for (std::size_t node = 0; node < plan.groups.size(); ++node) {
        local.reset();
        for (const std::uint32_t k : plan.groups[node]) {
          const auto& c = contrib[k];
          if (c.s.empty()) {
            std::copy(c.w.begin(), c.w.end(), full_block.data());
            local.add_matrix(full_block);
          } else if (c.rows.empty() && c.w.size() == n) {
            local.add_outer(c.w, c.s);
          } else {
            local.add_outer_rows(c.rows, c.w, c.s);
          }
        }
        log_msg(MessageDirection::kUp, static_cast<int>(node),
                PayloadKind::kPowerIterate,
                static_cast<std::uint64_t>(n) * r);
        center.merge(local);
      }
      center.round_into(applied);
      // Rayleigh quotient U^T (op U): exact top eigenvalue once the basis
      // has converged (the R diagonal of the QR lags by one iteration).
      {
        const DenseMatrix ut = basis.matrix().transposed();
        DenseMatrix rayleigh(r, r);
        kernels::gemm_acc(rayleigh.data(), ut.data(), applied.data(), r, n,
                          r);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = i + 1; j < r; ++j) {
            const double avg = 0.5 * (rayleigh(i, j) + rayleigh(j, i));
            rayleigh(i, j) = rayleigh(j, i) = avg;
          }
        lambda_top = symmetric_eigenvalues(rayleigh).front();
        flops_total.add(flops::gemm(r, n, r));
      }
      QrFactors f = orthonormalize_qr(applied);
      flops_total.add(flops::qr(n, r));
      const double step =
          subspace_distance(f.q, basis, SubspaceNorm::kSpectral);
      basis = std::move(f.q);
      trace.power_iters = p;
      ++rounds_logged;
      if (step <= 1e-12) break;
    }

    basis = model.finalize_init(std::move(basis), flops_total);
    u = std::move(basis);
    trace.init_lambda_top = lambda_top;
    trace.init_sum_energy = sum_energy;

    const double sigma_est =
        cfg.sigma_policy == SigmaPolicy::kOracle
            ? (oracle ? oracle->sigma_max()
                      : throw ConfigError(
                            "sigma policy 'oracle' requires ground truth"))
            : model.sigma_from_init(lambda_top, sum_energy);
    trace.sigma_estimate = sigma_est;
    eta_sigma_sq = sigma_est * sigma_est;

    TraceRecord rec;
    rec.iter = 0;
    if (oracle) {
      rec.se2 = subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
      rec.sef = subspace_distance(u, oracle->u_star, SubspaceNorm::kFrobenius);
      trace.init_se2 = rec.se2;
    }
    rec.flops = flops_total.total;
    rec.seconds = clock_seconds(t0);
    trace.records.push_back(rec);
    if (hook && *hook) (*hook)(0, u);
    initialized = true;
  }

  bool step() {
    if (!initialized) throw Error("driver: step() before initialize()");
    if (done || t >= cfg.t_max) return false;
    const int iter = t + 1;
    model.begin_iteration(iter);
    broadcast_basis(PayloadKind::kBasisBroadcast);

    const DenseMatrix& um = u.matrix();
    model.begin_pass(um);
    for_all_columns([&](std::size_t k, flops::Counter& fc) {
      model.process_column(um, k, {bt.row(k), r}, w_slab[k], obj_slab[k],
                           status_slab[k], fc);
    });

    DenseMatrix grad(n, r);
    reduce_grid_by_groups(grad, PayloadKind::kPartialGradient,
                          model.kind() == ProblemKind::kLrmc);
    const double objective =
        reduce_objective();  // diagnostic, no messages
    ++rounds_logged;

    const double eta = cfg.eta_scale * cfg.c_eta /
                       (model.eta_denominator() * eta_sigma_sq);
    DenseMatrix u_raw = um;
    kernels::axpy(u_raw.size(), -eta, grad.data(), u_raw.data());
    flops_total.add(flops::axpy(static_cast<std::uint64_t>(n) * r));
    // The 1e150 cap keeps the QR's squared norms from overflowing to inf.
    if (!u_raw.is_finite() || u_raw.max_abs() > 1e150)
      throw NonFiniteIterate("iterate became non-finite (step too large?)");
    QrFactors f = orthonormalize_qr(u_raw);
    flops_total.add(flops::qr(n, r));

    const double step_se =
        subspace_distance(f.q, u, SubspaceNorm::kSpectral);
    u = std::move(f.q);
    t = iter;

    TraceRecord rec;
    rec.iter = iter;
    rec.objective = objective;
    int flagged = 0;
    for (std::size_t k = 0; k < q; ++k) {
      if (status_slab[k].underdetermined) {
        ++flagged;
        trace.flagged_columns.push_back(static_cast<std::uint32_t>(k));
      }
    }
    rec.underdetermined_cols = flagged;
    if (oracle) {
      rec.se2 = subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
      rec.sef = subspace_distance(u, oracle->u_star, SubspaceNorm::kFrobenius);
      rec.max_col_err = max_column_error();
    }
    rec.flops = flops_total.total;
    rec.seconds = clock_seconds(t0);
    trace.records.push_back(rec);
    if (hook && *hook) (*hook)(iter, u);

    if (step_se <= cfg.tol) {
      trace.stopped_by_tol = true;
      done = true;
      return false;
    }
    return t < cfg.t_max;
  }

  double reduce_objective() {
    ExactAccumulator center;
    for (const auto& group : plan.groups) {
      ExactAccumulator local;
      for (const std::uint32_t k : group) local.add(obj_slab[k]);
      center.merge(local);
    }
    return center.round();
  }

  double max_column_error() {
    std::vector<double> err(q, 0.0);
    const DenseMatrix& um = u.matrix();
    parallel_for(q, threads, [&](std::size_t k) {
      double diff_sq = 0.0, ref_sq = 0.0;
      model.error_terms(um, {bt.row(k), r}, k, *oracle, &diff_sq, &ref_sq);
      err[k] = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq)
                            : (diff_sq > 0.0 ? kTraceNaN : 0.0);
    });
    double worst = 0.0;
    for (double e : err) worst = std::max(worst, e);
    return worst;
  }

  SolveResult finish(bool assemble_b) {
    // Final minimization half-step so the reported estimate is consistent
    // with the last basis.
    model.begin_iteration(t + 1);
    const DenseMatrix& um = u.matrix();
    model.begin_pass(um);
    for_all_columns([&](std::size_t k, flops::Counter& fc) {
      model.update_column(um, k, {bt.row(k), r}, status_slab[k], fc);
    });

    FinalStats& fs = trace.final_stats;
    {
      // Oracle-free residual on the full data.
      std::vector<double> res_sq(q, 0.0), ref_sq(q, 0.0);
      parallel_for(q, threads, [&](std::size_t k) {
        model.residual_terms(um, {bt.row(k), r}, k, &res_sq[k], &ref_sq[k]);
      });
      if (model.kind() == ProblemKind::kLrmc) {
        ExactAccumulator rs, fsq;
        for (std::size_t k = 0; k < q; ++k) {
          rs.add(res_sq[k]);
          fsq.add(ref_sq[k]);
        }
        const double denom = fsq.round();
        fs.residual = denom > 0.0 ? std::sqrt(rs.round() / denom) : 0.0;
        fs.objective = rs.round();
      } else {
        double worst = 0.0;
        ExactAccumulator obj;
        for (std::size_t k = 0; k < q; ++k) {
          obj.add(res_sq[k]);
          if (ref_sq[k] > 0.0)
            worst = std::max(worst, std::sqrt(res_sq[k] / ref_sq[k]));
        }
        fs.residual = worst;
        fs.objective = obj.round();
      }
    }
    if (oracle) {
      std::vector<double> diff_sq(q, 0.0), ref_sq(q, 0.0);
      parallel_for(q, threads, [&](std::size_t k) {
        model.error_terms(um, {bt.row(k), r}, k, *oracle, &diff_sq[k],
                          &ref_sq[k]);
      });
      double worst = 0.0;
      ExactAccumulator dsum, rsum;
      for (std::size_t k = 0; k < q; ++k) {
        dsum.add(diff_sq[k]);
        rsum.add(ref_sq[k]);
        if (ref_sq[k] > 0.0)
          worst = std::max(worst, std::sqrt(diff_sq[k] / ref_sq[k]));
      }
      fs.max_col_err = worst;
      const double denom = rsum.round();
      fs.rel_fro_err = denom > 0.0 ? std::sqrt(dsum.round() / denom) : 0.0;
      fs.se2 = subspace_distance(u, oracle->u_star, SubspaceNorm::kSpectral);
      fs.sef = subspace_distance(u, oracle->u_star, SubspaceNorm::kFrobenius);
    }

    SolveResult result;
    result.estimate.u = u;
    if (assemble_b) {
      DenseMatrix b(r, q);
      for (std::size_t k = 0; k < q; ++k)
        for (std::size_t i = 0; i < r; ++i) b(i, k) = bt(k, i);
      result.estimate.b = std::move(b);
    }
    result.trace = std::move(trace);
    return result;
  }
};

AltgdminDriver::AltgdminDriver(ColumnModel& model, const SolverConfig& cfg,
                               const GroundTruth* oracle, AggregationPlan plan)
    : impl_(std::make_unique<Impl>(model, cfg, oracle, std::move(plan))) {
  impl_->hook = &on_iterate;
}

AltgdminDriver::~AltgdminDriver() = default;

void AltgdminDriver::initialize() { impl_->initialize(); }
bool AltgdminDriver::step() { return impl_->step(); }

void AltgdminDriver::run() {
  initialize();
  while (step()) {
  }
}

SolveResult AltgdminDriver::finish(bool assemble_b) {
  return impl_->finish(assemble_b);
}

const OrthonormalBasis& AltgdminDriver::basis() const { return impl_->u; }
int AltgdminDriver::iteration() const { return impl_->t; }
const RunTrace& AltgdminDriver::trace() const { return impl_->trace; }

// ---- entry points ----

double resolve_c_tilde(const SolverConfig& cfg, const GroundTruth* oracle) {
  if (cfg.c_tilde) return *cfg.c_tilde;
  if (oracle) return 9.0 * oracle->kappa * oracle->kappa * oracle->mu * oracle->mu;
  return kDefaultCTilde;
}

double resolve_mu(const SolverConfig& cfg, const GroundTruth* oracle) {
  if (cfg.mu) return *cfg.mu;
  if (oracle) return oracle->mu;
  return kDefaultMu;
}

SolveResult altgdmin_lrcs(const LrcsData& data, std::size_t r,
                          const SolverConfig& cfg, const GroundTruth* oracle) {
  auto model = make_lrcs_model(data, r, cfg);
  AltgdminDriver driver(*model, cfg, oracle,
                        AggregationPlan::centralized(data.q));
  driver.run();
  return driver.finish(true);
}

SolveResult altgdmin_lrpr(const LrprData& data, std::size_t r,
                          const SolverConfig& cfg, const GroundTruth* oracle) {
  auto model = make_lrpr_model(data, r, cfg);
  AltgdminDriver driver(*model, cfg, oracle,
                        AggregationPlan::centralized(data.q));
  driver.run();
  return driver.finish(true);
}

SolveResult altgdmin_lrmc(const LrmcData& data, std::size_t r,
                          const SolverConfig& cfg, const GroundTruth* oracle) {
  auto model = make_lrmc_model(data, r, cfg, resolve_mu(cfg, oracle));
  AltgdminDriver driver(*model, cfg, oracle,
                        AggregationPlan::centralized(data.q));
  driver.run();
  return driver.finish(true);
}

namespace {

/// Runs only the init phase of a driver and pulls out the artifacts.
template <typename MakeModel>
LrcsInitResult init_only(MakeModel&& make, std::size_t q, double c_tilde) {
  SolverConfig cfg;
  cfg.c_tilde = c_tilde;
  auto model = make(cfg);
  AltgdminDriver driver(*model, cfg, nullptr, AggregationPlan::centralized(q));
  driver.initialize();
  LrcsInitResult out;
  out.u0 = driver.basis();
  out.alpha = driver.trace().alpha;
  out.power_iters = driver.trace().power_iters;
  out.lambda_top = driver.trace().init_lambda_top;
  out.sum_energy = driver.trace().init_sum_energy;
  return out;
}

}  // namespace

LrcsInitResult lrcs_init(const LrcsData& data, std::size_t r, double c_tilde) {
  return init_only(
      [&](const SolverConfig& cfg) { return make_lrcs_model(data, r, cfg); },
      data.q, c_tilde);
}

LrcsInitResult lrpr_init(const LrprData& data, std::size_t r, double c_tilde) {
  return init_only(
      [&](const SolverConfig& cfg) { return make_lrpr_model(data, r, cfg); },
      data.q, c_tilde);
}

OrthonormalBasis lrmc_init(const LrmcData& data, std::size_t r, double mu) {
  SolverConfig cfg;
  cfg.mu = mu;
  auto model = make_lrmc_model(data, r, cfg, mu);
  AltgdminDriver driver(*model, cfg, nullptr,
                        AggregationPlan::centralized(data.q));
  driver.initialize();
  return driver.basis();
}

double estimate_sigma_max(ProblemKind kind, double lambda_top,
                          double sum_energy, double samples, std::size_t r) {
  switch (kind) {
    case ProblemKind::kLrcs:
      return std::sqrt(std::max(lambda_top, 0.0)) / samples;
    case ProblemKind::kLrpr: {
      const double fro_sq = std::max(sum_energy / samples, 0.0);
      const double top = (std::max(lambda_top, 0.0) / samples - fro_sq) / 2.0;
      return std::sqrt(std::max(top, fro_sq / static_cast<double>(r)));
    }
    case ProblemKind::kLrmc:
      return std::sqrt(std::max(lambda_top, 0.0));
  }
  throw Error("estimate_sigma_max: unknown problem kind");
}

}  // namespace altgdmin

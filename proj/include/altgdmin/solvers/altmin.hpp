#pragma once

#include "altgdmin/problems/measure.hpp"
#include "altgdmin/solvers/config.hpp"
#include "altgdmin/solvers/trace.hpp"

namespace altgdmin {

/// Alternating exact minimization for LRCS: the B step is the decoupled
/// per-column least squares; the U step solves the coupled nr x nr normal
/// equations of the vectorized system. Same spectral init as the GD solver.
/// The per-iteration cost is dominated by assembling sum_k b_k b_k^T (x)
/// A_k^T A_k, which is exactly the expense the GD-based solver avoids.
SolveResult altmin_lrcs(const LrcsData& data, std::size_t r,
                        const SolverConfig& cfg,
                        const GroundTruth* oracle = nullptr);

/// Alternating exact minimization for LRMC: per-column LS for B, per-row LS
/// for U (both decoupled), followed by QR on U (with B <- R B, so the
/// iterate X = U B is unchanged and the objective stays monotone).
SolveResult altmin_lrmc(const LrmcData& data, std::size_t r,
                        const SolverConfig& cfg,
                        const GroundTruth* oracle = nullptr);

/// Model-level per-round communication element count for solver/problem
/// pairs, used by the comparison tables: GD-based solvers ship n*r per node
/// per round; closed-form AltMin for LRMC ships the observed entries,
/// |Omega|/gamma per node.
double per_round_comm_elements(ProblemKind kind, bool altmin, std::size_t n,
                               std::size_t r, std::size_t omega,
                               std::size_t gamma);

}  // namespace altgdmin

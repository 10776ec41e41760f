#pragma once

#include <cstdint>
#include <optional>

namespace altgdmin {

enum class SigmaPolicy {
  kFromInit,  // estimate sigma*_max from the initialization artifacts
  kOracle,    // use the planted value (tests / theory-faithful runs only)
};

enum class ProblemKind { kLrcs, kLrpr, kLrmc };

/// Knobs shared by all solvers. The step size is eta = c_eta / (m sigma^2)
/// for LRCS/LRPR and c_eta / (p sigma^2) for LRMC; c_eta must stay in
/// (0, 0.8] for the constant-step contraction to hold.
struct SolverConfig {
  int t_max = 500;
  double c_eta = 0.4;
  double tol = 1e-12;  // stop when SE2(U_t, U_{t-1}) <= tol
  bool sample_split = false;
  SigmaPolicy sigma_policy = SigmaPolicy::kFromInit;
  std::uint64_t seed = 0;  // power-method start and solver-side draws

  /// Truncation constant for the LRCS/LRPR spectral init. Defaults to
  /// 9 kappa^2 mu^2 from the oracle metadata when available, else a
  /// conservative 36.
  std::optional<double> c_tilde;

  /// Row-incoherence level for the LRMC init projection; defaults to the
  /// oracle's measured mu, else 2.0.
  std::optional<double> mu;

  int lrpr_inner_iters = 2;

  /// Diagnostic multiplier on eta (e.g. to provoke divergence in tests).
  double eta_scale = 1.0;

  int threads = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Fallback truncation constant when neither metadata nor an override is
/// available (kappa ~ mu ~ sqrt(2) heuristic).
inline constexpr double kDefaultCTilde = 36.0;
inline constexpr double kDefaultMu = 2.0;

}  // namespace altgdmin

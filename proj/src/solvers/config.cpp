#include "altgdmin/solvers/config.hpp"

#include "altgdmin/errors.hpp"

namespace altgdmin {

void SolverConfig::validate() const {
  if (!(c_eta > 0.0 && c_eta <= 0.8))
    throw ConfigError("c_eta must lie in (0, 0.8]");
  if (t_max < 1) throw ConfigError("T_max must be >= 1");
  if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (lrpr_inner_iters < 1)
    throw ConfigError("lrpr_inner_iters must be >= 1");
  if (!(eta_scale > 0.0)) throw ConfigError("eta_scale must be > 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (c_tilde && !(*c_tilde > 0.0))
    throw ConfigError("c_tilde must be > 0");
  if (mu && !(*mu > 0.0)) throw ConfigError("mu must be > 0");
}

}  // namespace altgdmin

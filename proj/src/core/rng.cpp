#include "altgdmin/core/rng.hpp"

#include <cmath>

namespace altgdmin {

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = next_symmetric();
    v = next_symmetric();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

DenseMatrix gaussian_matrix(std::uint64_t seed, std::size_t m, std::size_t n) {
  Rng rng(seed);
  DenseMatrix out(m, n);
  double* p = out.data();
  const std::size_t total = m * n;
  for (std::size_t i = 0; i < total; ++i) p[i] = rng.next_gaussian();
  return out;
}

}  // namespace altgdmin

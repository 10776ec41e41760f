// Micro-benchmark for the vector kernels: times each backend on the sizes
// the solvers actually use and reports effective GFLOP/s. Handy when
// checking that runtime dispatch picked the right variant on a new box.

#include <chrono>
#include <cstdio>
#include <vector>

#include "altgdmin/core/rng.hpp"
#include "altgdmin/kernels/kernels.hpp"

using namespace altgdmin;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

volatile double g_sink = 0.0;

void bench_backend(kernels::Backend backend) {
  if (!kernels::set_backend(backend)) {
    std::printf("%-6s not available on this CPU\n",
                std::string(kernels::backend_name(backend)).c_str());
    return;
  }
  const std::size_t n = 4096;
  const DenseMatrix xm = gaussian_matrix(1, 1, n);
  const DenseMatrix ym = gaussian_matrix(2, 1, n);
  std::vector<double> y(ym.data(), ym.data() + n);

  // dot
  {
    const int reps = 200000;
    const double t0 = now();
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += kernels::dot(xm.data(), ym.data(), n);
    const double dt = now() - t0;
    g_sink = acc;
    std::printf("%-6s dot   n=%zu    %7.2f GFLOP/s\n",
                std::string(kernels::backend_name(backend)).c_str(), n,
                2.0 * n * reps / dt / 1e9);
  }
  // axpy
  {
    const int reps = 200000;
    const double t0 = now();
    for (int i = 0; i < reps; ++i)
      kernels::axpy(n, 1e-9, xm.data(), y.data());
    const double dt = now() - t0;
    g_sink = y[0];
    std::printf("%-6s axpy  n=%zu    %7.2f GFLOP/s\n",
                std::string(kernels::backend_name(backend)).c_str(), n,
                2.0 * n * reps / dt / 1e9);
  }
  // gemm at solver-like shape (m x n times n x r)
  {
    const std::size_t m = 80, nn = 100, r = 8;
    const DenseMatrix a = gaussian_matrix(3, m, nn);
    const DenseMatrix b = gaussian_matrix(4, nn, r);
    std::vector<double> c(m * r, 0.0);
    const int reps = 20000;
    const double t0 = now();
    for (int i = 0; i < reps; ++i)
      kernels::gemm_acc(c.data(), a.data(), b.data(), m, nn, r);
    const double dt = now() - t0;
    g_sink = c[0];
    std::printf("%-6s gemm  %zux%zux%zu  %7.2f GFLOP/s\n",
                std::string(kernels::backend_name(backend)).c_str(), m, nn, r,
                2.0 * m * nn * r * reps / dt / 1e9);
  }
}

}  // namespace

int main() {
  std::printf("active backend: %s\n",
              std::string(kernels::backend_name(kernels::active_backend()))
                  .c_str());
  bench_backend(kernels::Backend::kScalar);
  bench_backend(kernels::Backend::kAvx2);
  return 0;
}

#pragma once

#include <cstddef>
#include <string_view>

namespace altgdmin::kernels {

// Data-parallel inner loops used by all dense linear algebra in this project.
// Every backend must produce bit-identical results to the scalar reference:
// reductions follow a canonical four-accumulator order (lane l sums the
// products with index == l mod 4, lanes combined as (s0+s1)+(s2+s3)), and no
// backend may contract mul+add into FMA. Elementwise kernels are trivially
// order-identical. This keeps runtime dispatch invisible to reproducibility.

enum class Backend {
  kScalar,
  kAvx2,
};

/// Backend in use for subsequent kernel calls.
Backend active_backend();

/// Selects a backend; returns false (and keeps the current one) if the
/// requested backend is not available on this CPU/build.
bool set_backend(Backend backend);

/// True if the backend was compiled in and the CPU supports it.
bool backend_available(Backend backend);

std::string_view backend_name(Backend backend);

/// Honors ALTGDMIN_KERNELS={auto,scalar,avx2}; called lazily on first use.
void init_from_env();

/// Canonical interleaved dot product of x and y (length n).
double dot(const double* x, const double* y, std::size_t n);

/// y[i] += a * x[i]
void axpy(std::size_t n, double a, const double* x, double* y);

/// x[i] *= a
void scal(std::size_t n, double a, double* x);

/// c[i,j] += sum_p a[i,p] * b[p,j], row-major, accumulation in ascending p.
/// c must not alias a or b.
void gemm_acc(double* c, const double* a, const double* b, std::size_t m,
              std::size_t k, std::size_t n);

inline double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(std::size_t n, double a, const double* x, double* y);
void scal_scalar(std::size_t n, double a, double* x);
void gemm_acc_scalar(double* c, const double* a, const double* b,
                     std::size_t m, std::size_t k, std::size_t n);

#if defined(ALTGDMIN_HAVE_AVX2)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(std::size_t n, double a, const double* x, double* y);
void scal_avx2(std::size_t n, double a, double* x);
void gemm_acc_avx2(double* c, const double* a, const double* b, std::size_t m,
                   std::size_t k, std::size_t n);
#endif

}  // namespace detail

}  // namespace altgdmin::kernels

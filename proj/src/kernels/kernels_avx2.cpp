#if defined(ALTGDMIN_HAVE_AVX2)

#include <immintrin.h>

#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin::kernels::detail {

// Bit-identical to the scalar reference: same lane assignment (i mod 4),
// same combine order, explicit mul+add (never _mm256_fmadd_pd).

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) lane[i & 3] += x[i] * y[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(std::size_t n, double a, double* x) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void gemm_acc_avx2(double* c, const double* a, const double* b, std::size_t m,
                   std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip == 0.0) continue;  // mirrors the scalar kernel exactly
      const double* brow = b + p * n;
      const __m256d av = _mm256_set1_pd(aip);
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const __m256d cv = _mm256_loadu_pd(crow + j);
        const __m256d bv = _mm256_loadu_pd(brow + j);
        _mm256_storeu_pd(crow + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
      }
      for (; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace altgdmin::kernels::detail

#endif  // ALTGDMIN_HAVE_AVX2

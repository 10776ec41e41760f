#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>

#include "altgdmin/kernels/kernels.hpp"

namespace altgdmin::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(std::size_t, double, const double*, double*);
  void (*scal)(std::size_t, double, double*);
  void (*gemm_acc)(double*, const double*, const double*, std::size_t,
                   std::size_t, std::size_t);
};

constexpr Table kScalarTable = {detail::dot_scalar, detail::axpy_scalar,
                                detail::scal_scalar, detail::gemm_acc_scalar};

#if defined(ALTGDMIN_HAVE_AVX2)
constexpr Table kAvx2Table = {detail::dot_avx2, detail::axpy_avx2,
                              detail::scal_avx2, detail::gemm_acc_avx2};
#endif

std::atomic<const Table*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::kScalar};
std::once_flag g_init_once;

bool cpu_has_avx2() {
#if defined(ALTGDMIN_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

void install(Backend backend) {
  switch (backend) {
#if defined(ALTGDMIN_HAVE_AVX2)
    case Backend::kAvx2:
      g_table.store(&kAvx2Table, std::memory_order_release);
      break;
#endif
    default:
      g_table.store(&kScalarTable, std::memory_order_release);
      backend = Backend::kScalar;
      break;
  }
  g_backend.store(backend, std::memory_order_release);
}

const Table* table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    init_from_env();
    t = g_table.load(std::memory_order_acquire);
  }
  return t;
}

}  // namespace

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kAvx2:
      return "avx2";
    default:
      return "scalar";
  }
}

Backend active_backend() {
  table();
  return g_backend.load(std::memory_order_acquire);
}

bool set_backend(Backend backend) {
  if (!backend_available(backend)) return false;
  install(backend);
  return true;
}

void init_from_env() {
  std::call_once(g_init_once, [] {
    Backend pick =
        backend_available(Backend::kAvx2) ? Backend::kAvx2 : Backend::kScalar;
    if (const char* env = std::getenv("ALTGDMIN_KERNELS")) {
      const std::string v(env);
      if (v == "scalar") {
        pick = Backend::kScalar;
      } else if (v == "avx2" && backend_available(Backend::kAvx2)) {
        pick = Backend::kAvx2;
      }
    }
    install(pick);
  });
}

double dot(const double* x, const double* y, std::size_t n) {
  return table()->dot(x, y, n);
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  table()->axpy(n, a, x, y);
}

void scal(std::size_t n, double a, double* x) { table()->scal(n, a, x); }

void gemm_acc(double* c, const double* a, const double* b, std::size_t m,
              std::size_t k, std::size_t n) {
  table()->gemm_acc(c, a, b, m, k, n);
}

}  // namespace altgdmin::kernels

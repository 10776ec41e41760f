#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "altgdmin/kernels/kernels.hpp"
#include "support/test_support.hpp"

using namespace altgdmin;

namespace {

// Runs fn under every available backend and requires bit-identical output.
template <typename Fn>
void for_each_backend_pair(Fn&& fn) {
  REQUIRE(kernels::set_backend(kernels::Backend::kScalar));
  auto scalar_result = fn();
  if (kernels::backend_available(kernels::Backend::kAvx2)) {
    REQUIRE(kernels::set_backend(kernels::Backend::kAvx2));
    auto simd_result = fn();
    kernels::set_backend(kernels::Backend::kScalar);
    REQUIRE(scalar_result.size() == simd_result.size());
    for (std::size_t i = 0; i < scalar_result.size(); ++i) {
      // Exact equality: the backends must agree bit for bit.
      CHECK(scalar_result[i] == simd_result[i]);
    }
  }
  kernels::set_backend(kernels::Backend::kAvx2);  // restore default if present
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dot matches plain summation to rounding") {
  const auto x = test::random_vector(137, 11);
  const auto y = test::random_vector(137, 12);
  double plain = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) plain += x[i] * y[i];
  const double canonical = kernels::dot(x.data(), y.data(), x.size());
  CHECK(std::abs(plain - canonical) <= 1e-12 * (1.0 + std::abs(plain)));
}

TEST_CASE("backend bit-equivalence on ragged sizes") {
  for (const std::size_t n :
       {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4},
        std::size_t{5}, std::size_t{7}, std::size_t{8}, std::size_t{64},
        std::size_t{65}, std::size_t{1023}}) {
    const auto x = test::random_vector(n, 100 + n);
    const auto y = test::random_vector(n, 200 + n);

    for_each_backend_pair([&] {
      return std::vector<double>{kernels::dot(x.data(), y.data(), n)};
    });

    for_each_backend_pair([&] {
      std::vector<double> out = y;
      kernels::axpy(n, 1.7, x.data(), out.data());
      return out;
    });

    for_each_backend_pair([&] {
      std::vector<double> out = x;
      kernels::scal(n, -0.3, out.data());
      return out;
    });
  }
}

TEST_CASE("gemm backend bit-equivalence including zero entries") {
  for (const auto [m, k, n] :
       {std::tuple<std::size_t, std::size_t, std::size_t>{3, 4, 5},
        {1, 1, 1},
        {7, 9, 6},
        {16, 16, 16},
        {5, 3, 13}}) {
    auto a = test::random_matrix(m, k, 31 * m + n);
    auto b = test::random_matrix(k, n, 17 * k + m);
    a(0, 0) = 0.0;  // exercise the skip-zero path in both backends
    for_each_backend_pair([&] {
      std::vector<double> c(m * n, 0.25);
      kernels::gemm_acc(c.data(), a.data(), b.data(), m, k, n);
      return c;
    });
  }
}

TEST_CASE("gemm matches naive triple loop") {
  const std::size_t m = 6, k = 11, n = 9;
  const auto a = test::random_matrix(m, k, 5);
  const auto b = test::random_matrix(k, n, 6);
  std::vector<double> c(m * n, 0.0);
  kernels::gemm_acc(c.data(), a.data(), b.data(), m, k, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double want = 0.0;
      for (std::size_t p = 0; p < k; ++p) want += a(i, p) * b(p, j);
      CHECK(std::abs(c[i * n + j] - want) <= 1e-12);
    }
  }
}

TEST_CASE("env override selects the scalar backend") {
  // set_backend is the programmatic analogue of ALTGDMIN_KERNELS.
  REQUIRE(kernels::set_backend(kernels::Backend::kScalar));
  CHECK(kernels::active_backend() == kernels::Backend::kScalar);
  CHECK(kernels::backend_name(kernels::active_backend()) == "scalar");
  if (kernels::backend_available(kernels::Backend::kAvx2))
    kernels::set_backend(kernels::Backend::kAvx2);
}

}  // TEST_SUITE

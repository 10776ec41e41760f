#include <doctest.h>

#include <cmath>
#include <set>

#include "altgdmin/core/matrix.hpp"
#include "altgdmin/core/rng.hpp"
#include "support/test_support.hpp"

using namespace altgdmin;

TEST_SUITE("rng_matrix") {

TEST_CASE("dense matrix rejects bad shapes and non-finite entries") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionMismatch);
  CHECK_THROWS_AS(
      DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
      Error);
  CHECK_THROWS_AS(
      DenseMatrix(1, 1, {std::numeric_limits<double>::quiet_NaN()}), Error);
  const DenseMatrix m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.max_abs() == 0.0);
}

TEST_CASE("orthonormal basis validates the gram matrix") {
  DenseMatrix eye(3, 2);
  eye(0, 0) = 1.0;
  eye(1, 1) = 1.0;
  CHECK_NOTHROW(OrthonormalBasis{eye});

  DenseMatrix skew = eye;
  skew(2, 0) = 0.1;  // breaks unit norm
  CHECK_THROWS_AS(OrthonormalBasis{skew}, Error);

  DenseMatrix wide(2, 3);
  CHECK_THROWS_AS(OrthonormalBasis{wide}, DimensionMismatch);
}

TEST_CASE("splitmix64 stream is the published sequence") {
  // Reference outputs of the SplitMix64 algorithm for seed 1234567.
  Rng rng(1234567);
  const std::uint64_t expected[] = {6457827717110365317ull,
                                    3203168211198807973ull,
                                    9817491932198370423ull};
  CHECK(rng.next_u64() == expected[0]);
  CHECK(rng.next_u64() == expected[1]);
  CHECK(rng.next_u64() == expected[2]);
}

TEST_CASE("seeded gaussian matrices are bit-reproducible") {
  const DenseMatrix a = gaussian_matrix(42, 17, 23);
  const DenseMatrix b = gaussian_matrix(42, 17, 23);
  CHECK(a == b);
  const DenseMatrix c = gaussian_matrix(43, 17, 23);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    any_diff |= a.data()[i] != c.data()[i];
  CHECK(any_diff);

  const SeededGaussianOperator op{42, 17, 23};
  CHECK(op.materialize() == a);
}

TEST_CASE("gaussian entries have unit variance at scale") {
  // 400 x 400 >= 1e5 samples; mean within 0.02, variance within [0.98, 1.02].
  const DenseMatrix g = gaussian_matrix(7, 400, 400);
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += g.data()[i];
  mean /= static_cast<double>(g.size());
  CHECK(std::abs(mean) <= 0.02);
  double var = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.data()[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(g.size() - 1);
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
}

TEST_CASE("derived seeds produce distinct streams") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(derive_seed(99, k));
  CHECK(seeds.size() == 1000);
  CHECK(derive_seed(99, 1, 2) != derive_seed(99, 2, 1));
}

TEST_CASE("matvec agrees with transposed matvec through the adjoint identity") {
  const DenseMatrix a = test::random_matrix(9, 7, 3);
  const auto x = test::random_vector(7, 4);
  const auto w = test::random_vector(9, 5);
  const auto ax = matvec(a, x);
  const auto atw = matvec_transposed(a, w);
  const double lhs = vec_dot(ax, w);
  const double rhs = vec_dot(x, atw);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
}

}  // TEST_SUITE

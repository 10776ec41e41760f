#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "altgdmin/core/exact_sum.hpp"

using namespace altgdmin;

namespace {

double exact_round(const std::vector<double>& xs) {
  ExactAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.round();
}

// Oracle: __float128 sequential summation is exact as long as all summand
// exponents fit in a ~110-bit window, then rounds once to double.
double f128_oracle(const std::vector<double>& xs) {
  __float128 s = 0;
  for (double x : xs) s += static_cast<__float128>(x);
  return static_cast<double>(s);
}

std::vector<double> random_bounded_exponents(std::size_t count,
                                             std::uint64_t seed,
                                             int exp_window) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> exp(-exp_window / 2, exp_window / 2);
  std::vector<double> out(count);
  for (double& x : out) x = std::ldexp(mant(gen), exp(gen));
  return out;
}

}  // namespace

TEST_SUITE("exact_sum") {

TEST_CASE("single element round-trips exactly") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1e30, 1e30);
  for (int i = 0; i < 2000; ++i) {
    const double x = dist(gen);
    CHECK(exact_round({x}) == x);
  }
  CHECK(exact_round({0.0}) == 0.0);
  CHECK(exact_round({-0.0}) == 0.0);
  CHECK(exact_round({5e-324}) == 5e-324);    // smallest subnormal
  CHECK(exact_round({-5e-324}) == -5e-324);
  CHECK(exact_round({1.7976931348623157e308}) == 1.7976931348623157e308);
}

TEST_CASE("pairs match IEEE addition") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> exp(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double a = std::ldexp(mant(gen), exp(gen));
    const double b = std::ldexp(mant(gen), exp(gen));
    CHECK(exact_round({a, b}) == a + b);  // a+b is correctly rounded
  }
}

TEST_CASE("matches the float128 oracle on bounded-exponent sums") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto xs = random_bounded_exponents(200, 1000 + seed, 90);
    CHECK(exact_round(xs) == f128_oracle(xs));
  }
}

TEST_CASE("catastrophic cancellation is exact") {
  CHECK(exact_round({1e300, 1e-300, -1e300}) == 1e-300);
  CHECK(exact_round({1e16, 1.0, -1e16}) == 1.0);
  CHECK(exact_round({1.0, 1e-20, -1.0}) == 1e-20);
  // Alternating huge values cancel to zero.
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(1e250);
    xs.push_back(-1e250);
  }
  xs.push_back(3.5);
  CHECK(exact_round(xs) == 3.5);
}

TEST_CASE("permutation invariance where plain summation differs") {
  const auto xs = random_bounded_exponents(500, 42, 120);
  const double reference = exact_round(xs);

  std::vector<double> shuffled = xs;
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(exact_round(shuffled) == reference);
  }

  // Plain double summation is order-sensitive on this data; make sure the
  // test is actually exercising a nontrivial case.
  double fwd = 0.0, bwd = 0.0;
  for (double x : xs) fwd += x;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) bwd += *it;
  WARN(fwd != bwd);
}

TEST_CASE("merge equals flat accumulation for any partition") {
  const auto xs = random_bounded_exponents(300, 77, 100);
  const double reference = exact_round(xs);
  std::mt19937_64 gen(78);
  for (int trial = 0; trial < 25; ++trial) {
    // Random number of groups with random boundaries.
    std::uniform_int_distribution<std::size_t> gdist(1, 7);
    const std::size_t groups = gdist(gen);
    std::vector<ExactAccumulator> parts(groups);
    std::uniform_int_distribution<std::size_t> pick(0, groups - 1);
    for (double x : xs) parts[pick(gen)].add(x);
    ExactAccumulator center;
    for (const auto& p : parts) center.merge(p);
    CHECK(center.round() == reference);
  }
}

TEST_CASE("matrix accumulator outer products by groups") {
  const std::size_t n = 13, r = 3, q = 40;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<std::vector<double>> ws(q), bs(q);
  for (std::size_t k = 0; k < q; ++k) {
    ws[k].resize(n);
    bs[k].resize(r);
    for (double& x : ws[k]) x = dist(gen);
    for (double& x : bs[k]) x = dist(gen);
  }
  ExactMatrixAccumulator flat(n, r);
  for (std::size_t k = 0; k < q; ++k) flat.add_outer(ws[k], bs[k]);
  DenseMatrix reference(n, r);
  flat.round_into(reference);

  for (std::size_t gamma : {std::size_t{2}, std::size_t{5}, std::size_t{7}}) {
    ExactMatrixAccumulator center(n, r);
    ExactMatrixAccumulator local(n, r);
    for (std::size_t node = 0; node < gamma; ++node) {
      local.reset();
      for (std::size_t k = node; k < q; k += gamma)
        local.add_outer(ws[k], bs[k]);
      center.merge(local);
    }
    DenseMatrix grouped(n, r);
    center.round_into(grouped);
    for (std::size_t i = 0; i < reference.size(); ++i)
      CHECK(reference.data()[i] == grouped.data()[i]);
  }
}

TEST_CASE("compaction guard handles many additions") {
  ExactAccumulator acc;
  for (int i = 0; i < 200000; ++i) acc.add(0.1);
  const double got = acc.round();
  // Exact: 200000 * fl(0.1) rounded once.
  __float128 want = 0;
  for (int i = 0; i < 200000; ++i) want += static_cast<__float128>(0.1);
  CHECK(got == static_cast<double>(want));
}

TEST_CASE("non-finite summands are rejected") {
  ExactAccumulator acc;
  CHECK_THROWS_AS(acc.add(std::numeric_limits<double>::infinity()), Error);
  CHECK_THROWS_AS(acc.add(std::numeric_limits<double>::quiet_NaN()), Error);
}

}  // TEST_SUITE

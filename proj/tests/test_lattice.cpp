#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qpwave/lattice.hpp"
#include "support.hpp"

using namespace qpwave;

TEST_CASE("frequency vector validates entries") {
  CHECK_NOTHROW(FrequencyVector({1.0, -0.5}));
  CHECK_THROWS_AS(FrequencyVector({}), error);
  CHECK_THROWS_AS(FrequencyVector({1.0, 0.0}), error);
  CHECK_THROWS_AS(FrequencyVector({std::nan("")}), error);
}

TEST_CASE("max_abs is the l-infinity norm") {
  FrequencyVector w({1.0, -3.5, 2.0});
  CHECK(w.max_abs() == 3.5);
  CHECK(w.nu() == 3);
}

TEST_CASE("frequency dot product") {
  FrequencyVector w({2.0, -1.0});
  CHECK(frequency(w, {3, 4}) == 2.0);
  CHECK(frequency(w, {0, 0}) == 0.0);
  CHECK_THROWS_AS(frequency(w, {1}), error);
}

TEST_CASE("index_norm is l1") {
  CHECK(index_norm({}) == 0);
  CHECK(index_norm({-3, 4}) == 7);
  CHECK(index_norm({0, 0, 0}) == 0);
}

TEST_CASE("enumerate_box is lexicographic and complete") {
  for (int nu = 1; nu <= 3; ++nu) {
    for (int radius = 0; radius <= 4; ++radius) {
      auto box = enumerate_box(radius, nu);
      CHECK(static_cast<long long>(box.size()) == box_cardinality(radius, nu));
      CHECK(std::is_sorted(box.begin(), box.end()));
      CHECK(std::adjacent_find(box.begin(), box.end()) == box.end());
      for (const auto& n : box) CHECK(in_box(n, radius));
    }
  }
}

TEST_CASE("box cardinality closed forms") {
  // nu = 1: 2N+1; nu = 2: 2N^2+2N+1.
  for (int N = 0; N <= 10; ++N) {
    CHECK(box_cardinality(N, 1) == 2 * N + 1);
    CHECK(box_cardinality(N, 2) == 2LL * N * N + 2 * N + 1);
  }
  CHECK_THROWS_AS(enumerate_box(-1, 2), error);
  CHECK_THROWS_AS(box_cardinality(2, 0), error);
}

TEST_CASE("in_box boundary") {
  CHECK(in_box({2, -2}, 4));
  CHECK_FALSE(in_box({3, -2}, 4));
}

TEST_CASE("rational arithmetic is exact and reduced") {
  Rational a(2, 4);
  CHECK(a == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 3) == Rational::integer(0));
  CHECK(Rational(3, 7) * Rational(7, 3) == Rational::integer(1));
  CHECK_THROWS_AS(Rational(1, 0), error);
}

TEST_CASE("exact frequency keeps the tiny divisor a double would lose") {
  // omega = (1, 1/10 + 10^-10) paired with n = (-1, 10): the exact answer is
  // 10^-9 on the nose; plain double accumulation is off by ~1e-17 absolute,
  // i.e. ~1e-8 relative, which matters when the divisor itself is the datum.
  std::vector<Rational> omega = {Rational::integer(1),
                                 Rational(1, 10) + Rational(1, 10000000000LL)};
  MultiIndex n = {-1, 10};
  Rational exact = frequency_exact(omega, n);
  CHECK(exact == Rational(1, 1000000000));

  double alpha = 0.1 + 1e-10;
  double approx = -1.0 + 10.0 * alpha;
  CHECK(std::abs(approx - 1e-9) > 0.0);  // the double path really does drift
  CHECK(std::abs(exact.to_double() - 1e-9) <= 1e-24);
}

TEST_CASE("exact frequency dimension check") {
  std::vector<Rational> omega = {Rational::integer(1)};
  CHECK_THROWS_AS(frequency_exact(omega, {1, 2}), error);
}

TEST_CASE("rational overflow is detected") {
  Rational big(0x7fffffffffffffffLL, 1);
  CHECK_THROWS_AS(big * big, error);
}

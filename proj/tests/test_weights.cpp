#include <doctest.h>

#include <cmath>

#include "coneasym/weights.hpp"

using namespace coneasym;

TEST_CASE("admissible windows") {
  const auto s3 = admissible_window(3, -3.0);
  REQUIRE(s3);
  CHECK(s3->lo == doctest::Approx(0.0));
  CHECK(s3->hi == doctest::Approx(1.0));
  const auto s2 = admissible_window(2, -2.0);
  REQUIRE(s2);
  CHECK(s2->lo == doctest::Approx(-0.5));
  CHECK(s2->hi == doctest::Approx(0.5));
  const auto c = admissible_window(1, -4.0);
  REQUIRE(c);
  CHECK(c->lo == doctest::Approx(-1.0));
  CHECK(c->hi == doctest::Approx(1.0));
  // lambda_1 too close to zero leaves nothing.
  CHECK_FALSE(admissible_window(1, -0.5));
  CHECK_FALSE(admissible_window(2, -0.7));
}

TEST_CASE("weight configuration flags") {
  const auto ok = make_weight_config(3, -3.0, 0.5);
  CHECK(ok.satisfies_basic);
  CHECK(ok.satisfies_extra);
  const auto bad = make_weight_config(3, -3.0, 2.0);
  CHECK_FALSE(bad.satisfies_extra);
}

TEST_CASE("J intervals are half-open and tile the line below the top") {
  const auto j1 = j_interval(3, 0.5, 1);
  CHECK(j1.lo == doctest::Approx(-0.5));
  CHECK(j1.hi == doctest::Approx(1.5));
  CHECK(j1.contains(-0.5));
  CHECK_FALSE(j1.contains(1.5));
  const auto loc = locate_interval(3, 0.5, -0.5);
  REQUIRE(loc);
  CHECK(loc->m == 1);
  CHECK(loc->near_boundary);
  CHECK(locate_interval(3, 0.5, -0.6)->m == 2);
  CHECK_FALSE(locate_interval(3, 0.5, 1.5));
  for (double x = -9.7; x < 1.4; x += 0.31) {
    const auto l = locate_interval(2, 0.1, x);
    REQUIRE(l);
    CHECK(j_interval(2, 0.1, l->m).contains(x));
  }
}

TEST_CASE("membership threshold") {
  CHECK(membership(1, 0.0, -0.99, 0));
  CHECK_FALSE(membership(1, 0.0, -1.0, 0));
  CHECK_FALSE(membership(3, 0.5, -1.5, 2));
  CHECK(membership(3, 0.5, -1.4, 5));
}

TEST_CASE("weighted integral against its closed form") {
  // Without logs: int_eps^1 x^{2b-1} dx = (1 - eps^{2b}) / (2b), b = (n+1)/2 - gamma + a.
  for (double a : {-0.9, -0.3, 0.4}) {
    const double b = 1.0 - 0.0 + a;
    const double eps = 1e-6;
    CHECK(weighted_norm_integral(1, 0.0, a, 0, eps) == doctest::Approx((1.0 - std::pow(eps, 2 * b)) / (2 * b)).epsilon(1e-10));
  }
  // With log^1: int_0^inf s^2 e^{-2bs} ds = 2/(2b)^3.
  CHECK(weighted_norm_integral(1, 0.0, 0.0, 1, 1e-30) == doctest::Approx(2.0 / 8.0).epsilon(1e-8));
}

TEST_CASE("quadrature classification agrees with the predicate off the threshold") {
  for (int n = 1; n <= 4; ++n) {
    for (double g : {-0.3, 0.2, 0.9}) {
      const double edge = g - 0.5 * (n + 1);
      for (double d : {-0.4, -2e-3, 2e-3, 0.4}) {
        for (int m = 0; m <= 3; ++m) CHECK(quadrature_says_member(n, g, edge + d, m) == membership(n, g, edge + d, m));
      }
    }
  }
}

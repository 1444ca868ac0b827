#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "coneasym/spectra.hpp"

using namespace coneasym;

namespace {

// Monomials of total degree d in v variables, by enumeration.
long long count_monomials(int v, int d) {
  if (d < 0) return 0;
  if (v == 1) return 1;
  long long total = 0;
  for (int first = 0; first <= d; ++first) total += count_monomials(v - 1, d - first);
  return total;
}

// Eigenvalues of the periodic second difference on a circle of circumference 2 pi r, ascending in magnitude.
Eigen::VectorXd discrete_circle(double r, int points) {
  const double h = 2.0 * std::numbers::pi * r / points;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(points, points);
  for (int i = 0; i < points; ++i) {
    a(i, i) = -2.0 / (h * h);
    a(i, (i + 1) % points) = 1.0 / (h * h);
    a(i, (i + points - 1) % points) = 1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  return ev;
}

}  // namespace

TEST_CASE("harmonic dimensions match the monomial count") {
  // Harmonic polynomials of degree j in n+1 variables: P_j minus r^2 P_{j-2}.
  for (int n = 1; n <= 5; ++n) {
    for (int j = 0; j <= 9; ++j) {
      CHECK(sphere_harmonic_dimension(n, j) == count_monomials(n + 1, j) - count_monomials(n + 1, j - 2));
    }
  }
}

TEST_CASE("sphere spectrum") {
  const auto s2 = sphere_spectrum(2, 4);
  REQUIRE(s2.size() == 5);
  CHECK(s2.lambda(0) == 0.0);
  CHECK(s2.lambda(1) == -2.0);
  CHECK(s2.lambda(3) == -12.0);
  CHECK(s2.multiplicities()[2] == 5);
  CHECK(s2.exact_lambda(4).exact == Rational(-20));
  CHECK(sphere_spectrum(3, 3).lambda(2) == -8.0);
}

TEST_CASE("circle spectrum against the discretized Laplacian") {
  for (double r : {0.5, 2.0 / 3.0, 1.0 / std::sqrt(2.0)}) {
    const auto cs = circle_spectrum(r, 4);
    const auto coarse = discrete_circle(r, 128);
    const auto fine = discrete_circle(r, 256);
    for (int j = 1; j <= 4; ++j) {
      // Second-order error, so one Richardson step; j-th pair sits at indices 2j-1, 2j.
      const double extrap = (4.0 * fine(2 * j) - coarse(2 * j)) / 3.0;
      CHECK(extrap == doctest::Approx(cs.lambda(j)).epsilon(1e-5));
      CHECK(fine(2 * j - 1) == doctest::Approx(fine(2 * j)).epsilon(1e-9));
      CHECK(cs.multiplicities()[j] == 2);
    }
  }
}

TEST_CASE("circle radii are carried exactly when rational") {
  const auto half = named_cross_section("circle:1/2", 3);
  CHECK(half.exact_lambda(1).exact == Rational(-4));
  CHECK(half.exact_lambda(3).exact == Rational(-36));
  const auto root = named_cross_section("circle:sqrt(1/2)", 2);
  CHECK(root.exact_lambda(2).exact == Rational(-8));
  CHECK(circle_spectrum(2.0 / 3.0, 2).exact_lambda(1).exact == Rational(-9, 4));
}

TEST_CASE("custom spectra are validated") {
  CHECK_THROWS_AS(custom_spectrum(2, {{-0.5, 1}, {-2.0, 1}}), NonZeroTop);
  CHECK_THROWS_AS(custom_spectrum(2, {{0.0, 1}, {-2.0, 1}, {-1.0, 1}}), NotDecreasing);
  CHECK_THROWS_AS(custom_spectrum(2, {{0.0, 1}, {-2.0, 0}}), BadMultiplicity);
  CHECK_THROWS_AS(custom_spectrum(2, {{0.0, 2}, {-2.0, 1}}), SpectrumError);
  CHECK_NOTHROW(custom_spectrum(4, {{0.0, 1}, {-2.5, 3}}));
  CHECK_THROWS(named_cross_section("torus", 3));
}

TEST_CASE("cross-section JSON round trip") {
  const auto a = named_cross_section("circle:2/3", 5);
  CHECK(CrossSection::from_json(a.to_json()) == a);
  const auto b = custom_spectrum(2, {{0.0, 1}, {-1.25, 2}});
  CHECK(CrossSection::from_json(b.to_json()) == b);
  CHECK(a.first_nonzero() == doctest::Approx(-2.25));
}

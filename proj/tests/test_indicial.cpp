#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "coneasym/indicial.hpp"

using namespace coneasym;

namespace {

// Multiplicity of r as a root of sum c_i z^i, counted as the number of vanishing derivatives.
int root_multiplicity(std::vector<double> c, double r, double tol = 1e-9) {
  int mult = 0;
  while (!c.empty()) {
    double v = 0.0, scale = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
      v = v * r + c[i];
      scale = scale * std::abs(r) + std::abs(c[i]);
    }
    if (std::abs(v) > tol * std::max(scale, 1.0)) break;
    ++mult;
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    c = d;
  }
  return mult;
}

}  // namespace

TEST_CASE("indicial roots of the sphere are integers") {
  const auto s2 = sphere_spectrum(2, 3);
  const auto r1 = indicial_roots(2, s2.exact_lambda(1));
  CHECK(r1.q_minus.exact == Rational(-1));
  CHECK(r1.q_plus.exact == Rational(2));
  CHECK(r1.nu.exact == Rational(3, 2));
  const auto r3 = indicial_roots(3, sphere_spectrum(3, 3).exact_lambda(3));
  CHECK(r3.mu.exact == Rational(-3));
}

TEST_CASE("indicial roots satisfy Vieta") {
  for (double lam : {0.0, -1.25, -2.0, -7.3, -41.0}) {
    for (int n = 1; n <= 4; ++n) {
      const auto r = indicial_roots(n, lam);
      CHECK(r.q_plus.value + r.q_minus.value == doctest::Approx(n - 1).epsilon(1e-13));
      CHECK(r.q_plus.value * r.q_minus.value == doctest::Approx(lam).epsilon(1e-13));
      CHECK(std::abs(conormal_symbol_delta(n, lam, r.q_minus.value)) < 1e-12 * std::max(1.0, -lam));
    }
  }
  CHECK(indicial_roots(1, ExactReal(Rational(-9, 4))).nu.exact == Rational(3, 2));
}

TEST_CASE("positive eigenvalues beyond the root threshold are rejected") {
  CHECK_THROWS_AS(indicial_roots(1, 0.5), PositiveEigenvalue);
}

TEST_CASE("mode polynomial is the product of shifted symbols") {
  const std::complex<double> z(0.37, -1.2);
  for (int k = 1; k <= 5; ++k) {
    std::complex<double> prod = 1.0;
    for (int i = 0; i < k; ++i) prod *= conormal_symbol_delta(3, -8.0, z + 2.0 * i);
    CHECK(std::abs(mode_polynomial(3, -8.0, k)(z) - prod) < 1e-12 * std::abs(prod));
    CHECK(std::abs(conormal_symbol_power(3, -8.0, k, z) - prod) < 1e-12 * std::abs(prod));
    CHECK(mode_polynomial(3, -8.0, k).degree() == static_cast<std::size_t>(2 * k));
  }
}

TEST_CASE("pole multiplicities agree with derivative counting") {
  const auto cs = circle_spectrum_exact(Rational(1, 4), 4);
  for (int k = 1; k <= 4; ++k) {
    const auto ps = pole_set(cs, k);
    for (const auto& p : ps.poles) {
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const auto poly = mode_polynomial(1, cs.lambda(j), k);
        CHECK(p.mode_multiplicity(j) == root_multiplicity(poly.coefficients(), p.location.value));
      }
    }
  }
}

TEST_CASE("n = 1: zero is a double pole") {
  const auto ps = pole_set(circle_spectrum(0.5, 3), 1);
  const auto* zero = ps.find(0.0);
  REQUIRE(zero != nullptr);
  CHECK(zero->order == 2);
  CHECK(zero->mode_multiplicity(0) == 2);
  // n = 2: q_0^+ = 1 is simple.
  const auto* one = pole_set(sphere_spectrum(2, 3), 1).find(1.0);
  REQUIRE(one != nullptr);
  CHECK(one->order == 1);
}

TEST_CASE("coincident poles merge with combined provenance") {
  // S^2 at k = 2: mode 0 contributes 1 - 2 = -1 and mode 1 contributes q_1^- = -1.
  const auto ps = pole_set(sphere_spectrum(2, 3), 2);
  const auto* p = ps.find(-1.0);
  REQUIRE(p != nullptr);
  CHECK(p->provenance.size() >= 2);
  CHECK_FALSE(p->approximate_merge);
}

TEST_CASE("polynomial shift") {
  const Polynomial p({1.0, -3.0, 2.0});
  const auto q = p.shifted(2.0);
  for (double z : {-1.0, 0.5, 3.0}) CHECK(q(z).real() == doctest::Approx(p(z + 2.0).real()));
}

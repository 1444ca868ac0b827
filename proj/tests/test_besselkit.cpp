#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "coneasym/besselkit.hpp"

using namespace coneasym::bessel;
using cd = std::complex<double>;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, trapezoid rule (geometric convergence).
cd k_by_trapezoid(double nu, cd z) {
  const double h = 1.0 / 128.0;
  cd sum = 0.5 * std::exp(-z);
  for (int i = 1; i < 128 * 40; ++i) {
    const double t = i * h;
    sum += std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
  }
  return sum * h;
}

}  // namespace

TEST_CASE("closed forms at half-integer order") {
  CHECK(bessel_i(0.5, 1.0) == doctest::Approx(0.937674888245488).epsilon(1e-13));
  CHECK(bessel_k(0.5, 1.0) == doctest::Approx(0.461068504447895).epsilon(1e-13));
  for (double x : {0.01, 0.3, 2.0, 15.0, 80.0}) {
    const double s = std::sqrt(2.0 / (std::numbers::pi * x));
    CHECK(rel(bessel_j(0.5, x), s * std::sin(x)) < 1e-10);
    CHECK(rel(bessel_y(0.5, x), -s * std::cos(x)) < 1e-10);
    CHECK(rel(bessel_j(1.5, x), s * (std::sin(x) / x - std::cos(x))) < 1e-9);
  }
}

TEST_CASE("I_0 tends to 1") { CHECK(bessel_i(0.0, 1e-10) == doctest::Approx(1.0).epsilon(1e-15)); }

TEST_CASE("small-argument law") {
  const double z = 1e-4;
  CHECK(rel(bessel_i(1.5, z), std::pow(z / 2.0, 1.5) / std::tgamma(2.5)) < 1e-8);
  for (double nu : {0.5, 1.5, std::sqrt(2.0), 7.0}) {
    const double slope = (std::log(bessel_i(nu, 1e-5)) - std::log(bessel_i(nu, 1e-6))) / std::log(10.0);
    CHECK(std::abs(slope - nu) < 1e-6);
  }
}

TEST_CASE("agreement with Boost on both sides of the asymptotic switch") {
  for (double nu : {0.0, 0.25, 1.0, 2.5, 9.0, 23.7, 50.0}) {
    for (double x : {1e-3, 0.2, 3.0, 9.5, 10.5, 31.0, 120.0, 600.0}) {
      CHECK(rel(bessel_i(nu, x), boost::math::cyl_bessel_i(nu, x)) < 1e-10);
      CHECK(rel(bessel_k(nu, x), boost::math::cyl_bessel_k(nu, x)) < 1e-10);
    }
  }
}

TEST_CASE("scaled variants stay finite at large argument") {
  const double i = bessel_i(3.0, 9000.0, true);
  const double k = bessel_k(3.0, 9000.0, true);
  CHECK(std::isfinite(i));
  CHECK(i * k * 9000.0 * 2.0 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("recurrence and Wronskian") {
  for (double nu : {1.0, 2.5, 13.3}) {
    for (double z : {0.05, 1.7, 44.0}) {
      const double lhs = bessel_i(nu - 1.0, z, true) - bessel_i(nu + 1.0, z, true);
      CHECK(rel(lhs, 2.0 * nu / z * bessel_i(nu, z, true)) < 1e-9);
      const double w = z * (bessel_i(nu, z, true) * bessel_k(nu + 1.0, z, true) + bessel_i(nu + 1.0, z, true) * bessel_k(nu, z, true));
      CHECK(std::abs(w - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("log gamma") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK(log_gamma(50.0) == doctest::Approx(boost::math::lgamma(50.0)).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_i(61.0, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_i(1.0, 2e4), DomainError);
  CHECK_THROWS_AS(bessel_k(25.0, cd(1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, cd(-1.0, 1.0)), DomainError);
}

TEST_CASE("complex K against its integral representation") {
  for (double nu : {0.0, 1.0, 2.5, 4.0, 7.3}) {
    for (cd z : {cd(1.0, 2.0), cd(3.0, -1.0), cd(0.5, 0.5), cd(0.8, -1.5), cd(6.0, 5.0)}) {
      CHECK(rel(bessel_k(nu, z), k_by_trapezoid(nu, z)) < 1e-10);
    }
  }
}

TEST_CASE("complex closed forms") {
  for (cd z : {cd(0.3, 0.4), cd(1.0, -1.5), cd(2.5, 2.5), cd(0.01, 30.0), cd(40.0, -7.0)}) {
    const cd kpre = std::sqrt(std::numbers::pi / (2.0 * z));
    CHECK(rel(bessel_k(0.5, z, true), kpre) < 1e-12);
    CHECK(rel(bessel_k(1.5, z, true), kpre * (1.0 + 1.0 / z)) < 1e-12);
    CHECK(rel(bessel_i(0.5, z, true), std::sqrt(2.0 / (std::numbers::pi * z)) * (1.0 - std::exp(-2.0 * z)) / 2.0) < 1e-11);
  }
}

TEST_CASE("complex values approach the real axis continuously") {
  for (double nu : {0.0, 1.0, 2.3, 7.0}) {
    for (double x : {0.4, 1.9, 2.1, 12.0}) {
      CHECK(rel(bessel_k(nu, cd(x, 1e-9)).real(), bessel_k(nu, x)) < 1e-8);
      CHECK(rel(bessel_i(nu, cd(x, 1e-9)).real(), bessel_i(nu, x)) < 1e-8);
    }
  }
}

TEST_CASE("complex Wronskian and derivatives") {
  for (double nu : {0.0, 1.5, 6.2}) {
    for (cd z : {cd(0.7, 1.3), cd(2.0, -2.0), cd(15.0, 9.0)}) {
      const cd w = bessel_i(nu, z, true) * bessel_k_derivative(nu, z, true) - bessel_i_derivative(nu, z, true) * bessel_k(nu, z, true);
      CHECK(std::abs(w * z + 1.0) < 1e-10);
    }
  }
}

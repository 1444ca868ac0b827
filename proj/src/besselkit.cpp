#include "coneasym/besselkit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "coneasym/quadrature.hpp"

namespace coneasym::bessel {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double magnitude(double v) { return std::abs(v); }
double magnitude(const cplx& v) { return std::abs(v); }

void check_real(double nu, double x, const char* fn) {
  if (!(nu >= 0.0 && nu <= kMaxOrder)) throw DomainError(std::string(fn) + ": order outside [0, 60]");
  if (!(x > 0.0 && x <= kMaxArgument)) throw DomainError(std::string(fn) + ": argument outside (0, 1e4]");
}

void check_complex(double nu, cplx z, const char* fn) {
  if (!(nu >= 0.0 && nu <= kMaxComplexOrder)) {
    throw DomainError(std::string(fn) + ": complex-argument order outside [0, 20]");
  }
  if (!(z.real() > 0.0) || !(std::abs(z) <= kMaxArgument) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(fn) + ": complex argument needs Re z > 0 and |z| <= 1e4");
  }
}

/// Large-argument regime threshold shared by I and K.
bool use_asymptotic(double nu, double r, double floor) { return r > std::max(floor, nu * nu); }

/// e^{-z} I_nu(z) from the ascending series, summed with running rescaling so
/// neither the prefactor nor intermediate terms under/overflow.
template <class T>
T series_i_scaled(double nu, T z) {
  const T quarter_z2 = 0.25 * z * z;
  T log_prefactor = nu * std::log(0.5 * z) - log_gamma(nu + 1.0) - z;
  if (nu == 0.0) log_prefactor = -z;
  T term = 1.0;
  T sum = 1.0;
  double log_scale = 0.0;
  const double peak = 0.5 * magnitude(z);
  for (int k = 1; k < 100000; ++k) {
    term *= quarter_z2 / (static_cast<double>(k) * (nu + k));
    sum += term;
    if (magnitude(term) > 1e150) {
      term *= 1e-150;
      sum *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
    if (k > peak && magnitude(term) <= 1e-17 * magnitude(sum)) break;
  }
  return std::exp(log_prefactor + log_scale) * sum;
}

/// Sum of a_k(nu) / z^k with the given sign pattern (+1 or -1 per power),
/// truncated at the smallest term.
template <class T>
T hankel_sum(double nu, T z, double sign) {
  const double mu = 4.0 * nu * nu;
  T term = 1.0;
  T sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (8.0 * k * z);
    const double mag = magnitude(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag <= 1e-17 * magnitude(sum)) break;
  }
  return sum;
}

double asymptotic_i_scaled(double nu, double x) { return hankel_sum(nu, x, -1.0) / std::sqrt(2.0 * kPi * x); }

template <class T>
T asymptotic_k_scaled(double nu, T z) {
  return std::sqrt(kPi / (2.0 * z)) * hankel_sum(nu, z, 1.0);
}

/// e^{z} K_nu(z) = \int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt, Re z > 0.
/// Evaluated relative to the peak of the integrand modulus to avoid overflow.
template <class T>
T integral_k_scaled(double nu, T z) {
  const double re = std::real(z);
  const double t_peak = std::asinh(nu / re);
  const auto log_mod = [&](double t) { return -re * (std::cosh(t) - 1.0) + nu * t; };
  const double log_peak = log_mod(t_peak);
  if (log_peak > 700.0) return T(std::numeric_limits<double>::infinity());
  double upper = t_peak + 1.0;
  while (log_mod(upper) - log_peak > -46.0) upper += 0.5;
  auto integrand = [&](double t) -> T {
    // cosh(nu t) e^{-log_peak} = (e^{nu t} + e^{-nu t}) / 2 e^{-log_peak}
    const T expo = -z * (std::cosh(t) - 1.0) + nu * t - log_peak;
    return 0.5 * std::exp(expo) * (1.0 + std::exp(-2.0 * nu * t));
  };
  QuadOptions opt;
  opt.rel_tol = 1e-14;
  opt.max_depth = 24;
  const auto res = integrate<T>(integrand, 0.0, upper, opt, 8);
  return res.value * std::exp(log_peak);
}

/// Temme's series for K_mu(z), K_{mu+1}(z) with |mu| <= 1/2, small |z|. Unscaled.
void temme_k(double mu, cplx z, cplx& k_mu, cplx& k_mu1) {
  const double eps = std::numeric_limits<double>::epsilon();
  const cplx d = -std::log(0.5 * z);
  const cplx e = mu * d;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
  const cplx fact2 = std::abs(e) < eps ? cplx(1.0) : std::sinh(e) / e;
  // gamma_1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gamma_2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
  const double g_plus = 1.0 + boost::math::tgamma1pm1(mu);
  const double g_minus = 1.0 + boost::math::tgamma1pm1(-mu);
  const double gam1 = std::abs(mu) < 1e-300
                          ? -std::numbers::egamma
                          : (boost::math::tgamma1pm1(mu) - boost::math::tgamma1pm1(-mu)) / (2.0 * mu * g_plus * g_minus);
  const double gam2 = 0.5 * (1.0 / g_minus + 1.0 / g_plus);
  cplx ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  cplx sum = ff;
  const cplx ee = std::exp(e);
  cplx p = 0.5 * ee * g_plus;
  cplx q = 0.5 / ee * g_minus;
  cplx c = 1.0;
  const cplx quarter_z2 = 0.25 * z * z;
  cplx sum1 = p;
  for (int i = 1; i < 10000; ++i) {
    ff = (static_cast<double>(i) * ff + p + q) / (i * static_cast<double>(i) - mu * mu);
    c *= quarter_z2 / static_cast<double>(i);
    p /= (i - mu);
    q /= (i + mu);
    const cplx del = c * ff;
    sum += del;
    sum1 += c * (p - static_cast<double>(i) * ff);
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  k_mu = sum;
  k_mu1 = sum1 * 2.0 / z;
}

/// Steed's continued fraction for e^z K_mu(z), e^z K_{mu+1}(z), |mu| <= 1/2, |z| >= 2.
void steed_k_scaled(double mu, cplx z, cplx& k_mu, cplx& k_mu1) {
  const double eps = std::numeric_limits<double>::epsilon();
  cplx b = 2.0 * (1.0 + z);
  cplx d = 1.0 / b;
  cplx h = d, delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  int i = 2;
  for (; i < 200000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / static_cast<double>(i);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < std::abs(s) * eps) break;
  }
  if (i >= 200000) throw DomainError("bessel_k: continued fraction did not converge");
  h *= a1;
  k_mu = std::sqrt(kPi / (2.0 * z)) / s;
  k_mu1 = k_mu * (mu + z + 0.5 - h) / z;
}

/// e^z K_nu(z) and e^z K_{nu+1}(z) for complex z with Re z > 0, by upward recurrence
/// from the fractional order.
void k_pair_scaled_complex(double nu, cplx z, cplx& k_nu, cplx& k_nu1) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  cplx k0, k1;
  if (std::abs(z) < 2.0) {
    temme_k(mu, z, k0, k1);
    const cplx scale = std::exp(z);
    k0 *= scale;
    k1 *= scale;
  } else {
    steed_k_scaled(mu, z, k0, k1);
  }
  for (int i = 1; i <= nl; ++i) {
    const cplx next = (mu + i) * (2.0 / z) * k1 + k0;
    k0 = k1;
    k1 = next;
  }
  k_nu = k0;
  k_nu1 = k1;
}

/// I'_nu(z) / I_nu(z) by the continued fraction for the ratio of successive orders.
cplx i_log_derivative(double nu, cplx z) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = 1e-300;
  const cplx xi = 1.0 / z;
  cplx h = nu * xi;
  if (std::abs(h) < tiny) h = tiny;
  cplx b = 2.0 * nu * xi;
  cplx d = 0.0;
  cplx c = h;
  int i = 1;
  for (; i < 200000; ++i) {
    b += 2.0 * xi;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  if (i >= 200000) throw DomainError("bessel_i: continued fraction did not converge");
  return h;
}

double i_scaled_real(double nu, double x) {
  if (use_asymptotic(nu, x, 30.0)) return asymptotic_i_scaled(nu, x);
  return series_i_scaled(nu, x);
}

double k_scaled_real(double nu, double x) {
  if (use_asymptotic(nu, x, 30.0)) return asymptotic_k_scaled(nu, x);
  return integral_k_scaled(nu, x);
}

cplx k_scaled_complex(double nu, cplx z) {
  if (z.imag() == 0.0) return k_scaled_real(nu, z.real());
  cplx k0, k1;
  k_pair_scaled_complex(nu, z, k0, k1);
  return k0;
}

/// Off the real axis I comes from the Wronskian I (f K - K') = 1/z with f = I'/I,
/// which avoids the cancellation the ascending series suffers near the imaginary axis.
cplx i_scaled_complex(double nu, cplx z) {
  if (z.imag() == 0.0) return i_scaled_real(nu, z.real());
  if (std::abs(z) <= 2.0) return series_i_scaled(nu, z);
  cplx k0, k1;
  k_pair_scaled_complex(nu, z, k0, k1);
  const cplx k_prime = (nu / z) * k0 - k1;
  return 1.0 / (z * (i_log_derivative(nu, z) * k0 - k_prime));
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be > 0");
  return boost::math::lgamma(x);
}

double bessel_i(double nu, double x, bool scaled) {
  check_real(nu, x, "bessel_i");
  const double v = i_scaled_real(nu, x);
  return scaled ? v : v * std::exp(x);
}

double bessel_k(double nu, double x, bool scaled) {
  check_real(nu, x, "bessel_k");
  const double v = k_scaled_real(nu, x);
  return scaled ? v : v * std::exp(-x);
}

double bessel_j(double nu, double x) {
  check_real(nu, x, "bessel_j");
  return boost::math::cyl_bessel_j(nu, x);
}

double bessel_y(double nu, double x) {
  check_real(nu, x, "bessel_y");
  return boost::math::cyl_neumann(nu, x);
}

std::complex<double> bessel_i(double nu, std::complex<double> z, bool scaled) {
  check_complex(nu, z, "bessel_i");
  const cplx v = i_scaled_complex(nu, z);
  return scaled ? v : v * std::exp(z);
}

std::complex<double> bessel_k(double nu, std::complex<double> z, bool scaled) {
  check_complex(nu, z, "bessel_k");
  const cplx v = k_scaled_complex(nu, z);
  return scaled ? v : v * std::exp(-z);
}

std::complex<double> bessel_i_derivative(double nu, std::complex<double> z, bool scaled) {
  check_complex(nu, z, "bessel_i_derivative");
  const cplx v = i_scaled_complex(nu + 1.0, z) + (nu / z) * i_scaled_complex(nu, z);
  return scaled ? v : v * std::exp(z);
}

std::complex<double> bessel_k_derivative(double nu, std::complex<double> z, bool scaled) {
  check_complex(nu, z, "bessel_k_derivative");
  const cplx v = (nu / z) * k_scaled_complex(nu, z) - k_scaled_complex(nu + 1.0, z);
  return scaled ? v : v * std::exp(-z);
}

}  // namespace coneasym::bessel

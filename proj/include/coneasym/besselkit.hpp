#pragma once

#include <complex>
#include <stdexcept>

namespace coneasym::bessel {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kMaxOrder = 60.0;
inline constexpr double kMaxArgument = 1e4;
/// Complex arguments are supported for orders up to this value.
inline constexpr double kMaxComplexOrder = 20.0;

// Real order nu in [0, 60], real argument x in (0, 1e4].

/// Modified Bessel I_nu(x); scaled returns e^{-x} I_nu(x).
double bessel_i(double nu, double x, bool scaled = false);
/// Modified Bessel K_nu(x); scaled returns e^{x} K_nu(x).
double bessel_k(double nu, double x, bool scaled = false);
double bessel_j(double nu, double x);
double bessel_y(double nu, double x);
/// log Gamma(x), x > 0.
double log_gamma(double x);

// Complex argument with Re z > 0 and |z| <= 1e4, real order nu in [0, 20].
// Scaled variants multiply by e^{-z} (I) and e^{z} (K).

std::complex<double> bessel_i(double nu, std::complex<double> z, bool scaled = false);
std::complex<double> bessel_k(double nu, std::complex<double> z, bool scaled = false);

/// d/dz I_nu(z) = I_{nu+1}(z) + (nu/z) I_nu(z); same scaling convention as bessel_i.
std::complex<double> bessel_i_derivative(double nu, std::complex<double> z, bool scaled = false);
/// d/dz K_nu(z) = (nu/z) K_nu(z) - K_{nu+1}(z); same scaling convention as bessel_k.
std::complex<double> bessel_k_derivative(double nu, std::complex<double> z, bool scaled = false);

}  // namespace coneasym::bessel

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "coneasym/rational.hpp"
#include "coneasym/spectra.hpp"

namespace coneasym {

class PositiveEigenvalue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Locations closer than this are treated as one pole when not both exact.
inline constexpr double kRootMergeTolerance = 1e-9;

/// Roots of the mode-restricted conormal symbol z^2 - (n-1) z + lambda.
struct IndicialData {
  ExactReal lambda;
  ExactReal nu;       ///< sqrt(((n-1)/2)^2 - lambda)
  ExactReal q_minus;  ///< (n-1)/2 - nu
  ExactReal q_plus;   ///< (n-1)/2 + nu
  ExactReal mu;       ///< equals q_minus
};

IndicialData indicial_roots(int n, const ExactReal& lambda);
inline IndicialData indicial_roots(int n, double lambda) { return indicial_roots(n, ExactReal(lambda)); }

/// z^2 - (n-1) z + lambda.
std::complex<double> conormal_symbol_delta(int n, double lambda, std::complex<double> z);

/// sigma(z) sigma(z+2) ... sigma(z+2(k-1)), the mode-restricted symbol of Delta^k.
std::complex<double> conormal_symbol_power(int n, double lambda, int k, std::complex<double> z);

/// Dense real polynomial, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::complex<double> operator()(std::complex<double> z) const;
  /// p(z + shift) as a polynomial in z.
  Polynomial shifted(double shift) const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<double> coeffs_;
};

/// Coefficients of the mode-restricted symbol of Delta^k (degree 2k).
Polynomial mode_polynomial(int n, double lambda, int k);

enum class Branch { Minus, Plus };

struct PoleProvenance {
  std::size_t j;  ///< eigenvalue index
  Branch branch;
  int shift;  ///< even shift 2i; the location is q_j^{branch} - shift

  friend bool operator==(const PoleProvenance&, const PoleProvenance&) = default;
};

struct Pole {
  ExactReal location;
  int order = 1;
  std::vector<PoleProvenance> provenance;
  /// True when coincident roots were merged by tolerance rather than exactly.
  bool approximate_merge = false;

  /// Multiplicity of the location as a root of the mode-j polynomial.
  int mode_multiplicity(std::size_t j) const;
};

/// Poles of the inverse conormal symbol of Delta^k, sorted by location.
struct PoleSet {
  int k = 1;
  std::vector<Pole> poles;

  const Pole* find(double location, double tol = kRootMergeTolerance) const;
  nlohmann::json to_json() const;
};

PoleSet pole_set(const CrossSection& cs, int k);

/// True when two optionally exact reals coincide: exactly if both are exact,
/// else within tol. `approximate` is set when the tolerance path was used.
bool coincide(const ExactReal& a, const ExactReal& b, bool& approximate, double tol = kRootMergeTolerance);

}  // namespace coneasym

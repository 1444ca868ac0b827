#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coneasym/rational.hpp"

namespace coneasym {

/// Base class for violations of the cross-section invariants.
class SpectrumError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NonZeroTop : public SpectrumError {
 public:
  using SpectrumError::SpectrumError;
};
class NotDecreasing : public SpectrumError {
 public:
  using SpectrumError::SpectrumError;
};
class BadMultiplicity : public SpectrumError {
 public:
  using SpectrumError::SpectrumError;
};

/// Absolute tolerance for comparisons between floating eigenvalues.
inline constexpr double kEigenvalueTolerance = 1e-12;

/// Truncated spectrum of the Laplacian on a closed connected n-manifold.
///
/// Eigenvalues follow the sign convention Delta <= 0: lambda_0 = 0 (simple),
/// then strictly decreasing negative values. Immutable after construction.
class CrossSection {
 public:
  CrossSection(int n, std::string name, std::vector<ExactReal> eigenvalues,
               std::vector<int> multiplicities);

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return eigenvalues_.size(); }
  const std::vector<ExactReal>& eigenvalues() const { return eigenvalues_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  double lambda(std::size_t j) const { return eigenvalues_.at(j).value; }
  const ExactReal& exact_lambda(std::size_t j) const { return eigenvalues_.at(j); }

  /// lambda_1, the first nonzero eigenvalue; throws if the spectrum has only lambda_0.
  double first_nonzero() const;

  nlohmann::json to_json() const;
  static CrossSection from_json(const nlohmann::json& doc);

  friend bool operator==(const CrossSection& a, const CrossSection& b);

 private:
  int n_;
  std::string name_;
  std::vector<ExactReal> eigenvalues_;
  std::vector<int> multiplicities_;
};

/// Dimension of the space of degree-j spherical harmonics on S^n.
long long sphere_harmonic_dimension(int n, int j);

/// Round sphere S^n: lambda_j = -j(j+n-1), j = 0..j_max.
CrossSection sphere_spectrum(int n, int j_max);

/// Flat circle of the given radius (n = 1): lambda_j = -(j/r)^2.
/// r^2 is recognized as a small-denominator rational when possible.
CrossSection circle_spectrum(double radius, int j_max);
/// Same, with r^2 given exactly.
CrossSection circle_spectrum_exact(const Rational& radius_squared, int j_max);

/// Validated user spectrum from (lambda, multiplicity) pairs.
CrossSection custom_spectrum(int n, const std::vector<std::pair<ExactReal, int>>& pairs,
                             std::string name = "custom");

/// Resolves a named cross-section: "s1", "s2", "s3", ..., "sN" (spheres) or
/// "circle:<r>" / "circle:<p>/<q>" with r^2 = p/q.
CrossSection named_cross_section(const std::string& spec, int j_max);

}  // namespace coneasym

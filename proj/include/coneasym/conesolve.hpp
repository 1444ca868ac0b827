#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coneasym/quadrature.hpp"

namespace coneasym {

class SpectrumRay : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BadProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ProfileShape { Bump, Plateau, Box };

/// Initial radial profile with compact support [x_lo, x_hi] away from the tip.
///   bump:    amplitude * exp(1 - 1/(1 - s^2)), s the support mapped to (-1, 1)
///   plateau: amplitude on [x_lo + ramp, x_hi - ramp], C-infinity ramps to 0 at the ends
///   box:     amplitude on the support
struct InitialProfile {
  ProfileShape shape = ProfileShape::Bump;
  double x_lo = 1.0;
  double x_hi = 2.0;
  double ramp = 0.0;
  double amplitude = 1.0;

  double operator()(double x) const;
  /// Support end points plus interior points where the profile is not smooth
  /// or changes character, sorted.
  std::vector<double> breakpoints() const;
  void validate() const;
};

InitialProfile bump_profile(double x_lo, double x_hi, double amplitude = 1.0);
InitialProfile plateau_profile(double x_lo, double x_hi, double ramp, double amplitude = 1.0);
InitialProfile box_profile(double x_lo, double x_hi, double amplitude = 1.0);

void to_json(nlohmann::json& j, const InitialProfile& f);
void from_json(const nlohmann::json& j, InitialProfile& f);

/// One separated mode a_j(t, x) of the heat equation on the model cone.
struct ModeProblem {
  int n = 1;
  std::size_t j = 0;
  double lambda_j = 0.0;
  double nu = 0.0;
  InitialProfile f;
  double t = 1.0;
};

ModeProblem make_mode_problem(int n, double lambda_j, const InitialProfile& f, double t, std::size_t j = 0);

struct ModeSample {
  double x = 0.0;
  double value = 0.0;
};

struct ModeSolution {
  int n = 1;
  std::size_t j = 0;
  double nu = 0.0;
  double t = 1.0;
  std::vector<ModeSample> samples;
  /// Kernel evaluations spent by the quadrature over all samples.
  std::size_t kernel_terms = 0;
  /// Largest per-sample error estimate relative to the sample value.
  double quadrature_error_estimate = 0.0;
};

/// p_nu(t, x, xi) = (x xi)^{(1-n)/2} (2t)^{-1} exp(-(x^2 + xi^2)/(4t)) I_nu(x xi / (2t)).
double heat_kernel(int n, double nu, double t, double x, double xi);

/// a_j(t, x) = \int p_nu(t, x, xi) f(xi) xi^n dxi for every x in x_eval.
ModeSolution heat_mode(const ModeProblem& mp, const std::vector<double>& x_eval, double rel_tol = 1e-9);

/// Single value of the mode at (t, x); throws QuadratureFailure when rel_tol is not met.
double heat_mode_value(const ModeProblem& mp, double t, double x, double rel_tol = 1e-9,
                       QuadResult<double>* diagnostics = nullptr);

/// Log-spaced abscissae from lo to hi inclusive with the given density.
std::vector<double> log_spaced_grid(double lo = 1e-4, double hi = 1e-1, int per_decade = 16);

using ModeEvaluator = std::function<double(double t, double x)>;

/// Rectangular (t, x) patch, sampled with spacing h in both directions.
struct ResidualPatch {
  int n = 1;
  double lambda_j = 0.0;
  double t_lo = 0.5, t_hi = 2.0;
  double x_lo = 0.5, x_hi = 2.0;
  double h = 1e-2;
  /// Interior points per axis at which the residual is sampled.
  int points = 9;
};

/// max |da/dt - (a'' + (n/x) a' + (lambda_j/x^2) a)| over the patch using
/// sixth-order central differences with step h.
double heat_pde_residual(const ModeEvaluator& a, const ResidualPatch& patch);

struct ResolventSample {
  double x = 0.0;
  std::complex<double> value;
  /// u(x) = phi_dec(x) * decaying_coefficient + phi_reg(x) * regular_coefficient where
  /// phi_reg = x^{(1-n)/2} I_nu(x sqrt(lambda)), phi_dec = x^{(1-n)/2} K_nu(x sqrt(lambda)).
  /// Left of the support the decaying coefficient vanishes, right of it the regular one does.
  std::complex<double> regular_coefficient;
  std::complex<double> decaying_coefficient;
};

struct ResolventModeSolution {
  int n = 1;
  double lambda_j = 0.0;
  double nu = 0.0;
  std::complex<double> lambda;
  std::complex<double> sqrt_lambda;
  std::vector<ResolventSample> samples;
  double quadrature_error_estimate = 0.0;
};

/// Solves (lambda - L_j) u = f on the model cone, L_j = d^2/dx^2 + (n/x) d/dx + lambda_j/x^2,
/// with u regular at 0 and decaying at infinity.
ResolventModeSolution resolvent_mode(int n, double lambda_j, std::complex<double> lambda, const InitialProfile& f,
                                     const std::vector<double>& x_eval, double rel_tol = 1e-12);

/// max |(lambda - L_j) u - f| over x_eval using sixth-order differences with step h.
double resolvent_residual(int n, double lambda_j, std::complex<double> lambda, const InitialProfile& f,
                          const std::vector<double>& x_eval, double h = 2.5e-3);

struct SectorialEntry {
  double arg = 0.0;
  double modulus = 0.0;
  double sup_norm = 0.0;
  /// |lambda| * sup_x |u|.
  double scaled = 0.0;
};

struct SectorialCheck {
  std::vector<SectorialEntry> entries;
  /// Largest per-ray ratio max(scaled) / min(scaled).
  double max_ratio = 0.0;
  bool passed = false;
};

/// |lambda| sup|u| over the given rays and moduli; passes when max_ratio < factor.
SectorialCheck sectorial_check(int n, double lambda_j, const InitialProfile& f, const std::vector<double>& args,
                               const std::vector<double>& moduli, const std::vector<double>& x_grid,
                               double factor = 2.0);

/// CSV with header mode_j,nu,t,x,value, one row per sample, 17 significant digits.
void write_mode_csv(std::ostream& os, const std::vector<ModeSolution>& solutions);

}  // namespace coneasym

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coneasym/rational.hpp"
#include "coneasym/spectra.hpp"

namespace coneasym {

class WindowViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class KTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class ContinuityHypothesisFailed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The constant cut-off function C_omega.
struct ConstantOrigin {
  friend bool operator==(const ConstantOrigin&, const ConstantOrigin&) = default;
};

enum class ShiftBranch { Odd, Even };

/// Shifts of the j = 0 indicial roots: x^{2nu} for every n, x^{2nu-1} only for n = 2.
struct EvenShiftOrigin {
  int nu;
  ShiftBranch branch;
  friend bool operator==(const EvenShiftOrigin&, const EvenShiftOrigin&) = default;
};

/// x^{-mu_j + 2 nu} where mu_j lies in the window J_m.
struct SpectralOrigin {
  std::size_t j;
  int m;
  int nu;
  friend bool operator==(const SpectralOrigin&, const SpectralOrigin&) = default;
};

using TermOrigin = std::variant<ConstantOrigin, EvenShiftOrigin, SpectralOrigin>;

std::string describe(const TermOrigin& origin);

/// One candidate term omega(x) x^{exponent} (c_0 + ... + c_L log^L x), L = max_log_power.
/// The log power is an upper bound and the term may be absent from any given solution.
struct AsymTerm {
  ExactReal exponent;
  int max_log_power = 0;
  std::vector<TermOrigin> origins;
  bool approximate_merge = false;
};

nlohmann::json term_to_json(const AsymTerm& term);

struct TemplateValidity {
  bool window_nonempty = false;
  bool gamma_inside = false;
  bool truncation_sufficient = false;
  /// mu_j values within kBoundaryFlagTolerance of a J_m endpoint.
  std::vector<std::size_t> resonant_indices;
};

/// Candidate small-x expansion for elements of the domain of the k-th power of
/// the Laplacian, with the remainder decay exponent.
struct ExpansionTemplate {
  int n = 1;
  double gamma = 0.0;
  int k = 2;
  std::vector<AsymTerm> terms;  ///< sorted by exponent, coincident exponents merged
  double remainder_exponent = 0.0;
  TemplateValidity validity;

  bool complete() const { return validity.truncation_sufficient; }
  const AsymTerm* find(double exponent, double tol = 1e-9) const;
  /// (exponent rounded to 1e-9, max_log_power) pairs, for set comparisons.
  std::set<std::pair<long long, int>> signature() const;
  std::vector<double> exponents() const;

  nlohmann::json to_json() const;
};

/// Checks hypotheses shared by both template constructions; throws on violations.
TemplateValidity check_template_inputs(const CrossSection& cs, double gamma, int k);

/// Template read off the closed formula: C_omega, the j = 0 shift series, and
/// the spectral blocks x^{-mu_j + 2 nu}, mu_j in J_m, 0 <= nu <= k - m, with
/// log bound m + nu - 2.
ExpansionTemplate template_closed_form(const CrossSection& cs, double gamma, int k);

/// Same template built step by step: starting from C_omega at k = 1, each
/// step k' adjoins the poles of the Delta^{k'} conormal symbol lying in J_{k'},
/// classified by provenance.
ExpansionTemplate template_inductive(const CrossSection& cs, double gamma, int k);

struct SeriesTerm {
  int nu;
  double exponent;
  int max_log_power;
};

struct SpectralBlock {
  int m;
  std::size_t j;
  double mu;
  std::vector<SeriesTerm> terms;  ///< nu = m-2 .. k-2, exponent -mu + 2(nu - m + 2), log <= nu
};

/// Solution expansion u(t, x, y) near the tip implied by a template.
struct ExpansionReport {
  ExpansionTemplate tmpl;
  double s = 0.0;
  double p = 2.0;
  std::vector<SeriesTerm> odd_series;   ///< a_nu x^{2nu-1}, n = 2 only
  std::vector<SeriesTerm> even_series;  ///< b_{nu + delta_{n,1}} x^{2nu}
  std::vector<SpectralBlock> spectral_blocks;
  std::vector<double> exponents;  ///< distinct exponents, including the constant
  bool integer_exponents = false;
  /// |v| <= L x^{remainder_exponent - eps} for every eps > 0.
  double remainder_exponent = 0.0;
  double default_epsilon = 1e-3;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

ExpansionReport render_uexp(const ExpansionTemplate& tmpl, double s, double p);

}  // namespace coneasym
